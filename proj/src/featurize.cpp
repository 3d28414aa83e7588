#include "gridfeat/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gridfeat/csv.hpp"
#include "gridfeat/solar.hpp"

namespace gridfeat {

ScheduleTable ScheduleTable::defaults() {
  ScheduleTable s;
  s.windows = {{"breakfast", {6, 9}}, {"lunch", {11, 15}}, {"dinner", {18, 21}},
               {"work", {9, 17}},     {"free_time", {17, 22}}, {"sleep", {22, 7}}};
  return s;
}

bool ScheduleTable::active(const std::string& window, int local_hour) const {
  auto it = windows.find(window);
  if (it == windows.end()) throw std::out_of_range("unknown schedule window '" + window + "'");
  return it->second.contains(local_hour);
}

void ScheduleTable::validate() const {
  for (const auto& [name, _] : defaults().windows) {
    if (!windows.count(name)) throw std::invalid_argument("schedule is missing window '" + name + "'");
  }
  for (const auto& [name, w] : windows) {
    if (w.start < 0 || w.start > 23 || w.end < 0 || w.end > 24 || w.start == w.end) {
      throw std::invalid_argument("schedule window '" + name + "' has invalid hours");
    }
  }
}

void FeatureOptions::validate() const {
  if (rolling_window < 2) throw std::invalid_argument("rolling window must be >= 2");
  if (warmup_hours < 0) throw std::invalid_argument("warm-up must be >= 0");
  if (!(activity_threshold_kwh >= 0)) throw std::invalid_argument("activity threshold must be >= 0");
  schedule.validate();
}

Column lag(const std::vector<double>& series, const std::vector<std::uint8_t>& missing, int k) {
  if (k < 1) throw std::invalid_argument("lag must be >= 1 (lag 0 leaks the current hour)");
  const std::size_t n = series.size();
  Column c{std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1)};
  for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) {
    if (missing[t - k]) continue;
    c.values[t] = series[t - k];
    c.missing[t] = 0;
  }
  return c;
}

RollingColumns rolling_stats(const std::vector<double>& series, const std::vector<std::uint8_t>& missing,
                             int window) {
  if (window < 2) throw std::invalid_argument("rolling window must be >= 2");
  const std::size_t n = series.size();
  const auto w = static_cast<std::size_t>(window);
  RollingColumns r{{std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1)},
                   {std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1)}};
  // missing hours in the window [t - W, t - 1]
  std::size_t gaps = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t >= 1 && missing[t - 1]) ++gaps;
    if (t >= w + 1 && missing[t - w - 1]) --gaps;
    if (t < w || gaps > 0) continue;
    double sum = 0.0;
    for (std::size_t i = t - w; i < t; ++i) sum += series[i];
    const double mean = sum / static_cast<double>(w);
    double ss = 0.0;
    for (std::size_t i = t - w; i < t; ++i) ss += (series[i] - mean) * (series[i] - mean);
    r.mean.values[t] = mean;
    r.mean.missing[t] = 0;
    r.std.values[t] = std::sqrt(ss / static_cast<double>(w));
    r.std.missing[t] = 0;
  }
  return r;
}

std::string part_of_day(int local_hour) {
  if (local_hour < 6) return "night";
  if (local_hour < 12) return "morning";
  if (local_hour < 18) return "afternoon";
  return "evening";
}

CalendarFeatures calendar_features(const LocalTime& lt) {
  return {lt.hour,
          lt.weekday,
          lt.iso_week,
          part_of_day(lt.hour),
          lt.dst,
          lt.weekday >= 5,
          static_cast<double>(lt.utc_offset_seconds) / 3600.0};
}

CalendarFeatures calendar_features(std::int64_t epoch_hour, const TimeZone& zone) {
  return calendar_features(zone.to_local(epoch_hour * 3600));
}

ActivityFlags activity_flags(const LocalTime& lt, const ScheduleTable& schedule,
                             const HolidayCalendar& calendar) {
  if (!calendar.covers(lt.local_day)) {
    throw std::out_of_range("holiday calendar '" + calendar.region() + "' does not cover local day " +
                            std::to_string(lt.local_day));
  }
  ActivityFlags f{};
  f.breakfast = schedule.active("breakfast", lt.hour);
  f.lunch = schedule.active("lunch", lt.hour);
  f.dinner = schedule.active("dinner", lt.hour);
  f.work = schedule.active("work", lt.hour);
  f.free_time = schedule.active("free_time", lt.hour);
  f.sleep = schedule.active("sleep", lt.hour);
  f.weekend = lt.weekday >= 5;
  f.weekday = !f.weekend;
  f.holiday = calendar.is_holiday(lt.local_day);
  return f;
}

ActivityFlags activity_flags(std::int64_t epoch_hour, const TimeZone& zone, const ScheduleTable& schedule,
                             const HolidayCalendar& calendar) {
  return activity_flags(zone.to_local(epoch_hour * 3600), schedule, calendar);
}

namespace {

struct DayStats {
  bool complete = false;
  double total = 0.0;
  double median = 0.0;
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace

YesterdayColumns yesterday_stats(const std::vector<double>& series, const std::vector<std::uint8_t>& missing,
                                 const std::vector<std::int64_t>& local_days) {
  const std::size_t n = series.size();
  if (local_days.size() != n + 2) throw std::invalid_argument("local_days must cover hours -1 .. n");
  std::map<std::int64_t, DayStats> days;
  for (std::size_t start = 0; start < n;) {
    const auto day = local_days[start + 1];
    std::size_t end = start;
    while (end + 1 < n && local_days[end + 2] == day) ++end;
    DayStats s;
    s.complete = local_days[start] != day && local_days[end + 2] != day;
    std::vector<double> vals;
    for (std::size_t i = start; i <= end && s.complete; ++i) {
      if (missing[i]) s.complete = false;
      vals.push_back(series[i]);
    }
    if (s.complete) {
      for (double v : vals) s.total += v;
      s.median = median_of(vals);
    }
    days[day] = s;
    start = end + 1;
  }

  YesterdayColumns y{{std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1)},
                     {std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1)}};
  auto complete = [&](std::int64_t d) -> const DayStats* {
    auto it = days.find(d);
    return (it != days.end() && it->second.complete) ? &it->second : nullptr;
  };
  for (std::size_t t = 0; t < n; ++t) {
    const auto yd = local_days[t + 1] - 1;
    const auto* ys = complete(yd);
    if (!ys) continue;
    y.median.values[t] = ys->median;
    y.median.missing[t] = 0;
    double sum = 0.0;
    bool ok = true;
    for (int k = 1; k <= 7 && ok; ++k) {
      const auto* s = complete(yd - k);
      if (!s) ok = false;
      else sum += s->total;
    }
    if (!ok || sum <= 0.0) continue;
    y.ratio.values[t] = ys->total / (sum / 7.0);
    y.ratio.missing[t] = 0;
  }
  return y;
}

Column kitchen_activity(const std::vector<double>& submeter, const std::vector<std::uint8_t>& missing,
                        double threshold_kwh) {
  const std::size_t n = submeter.size();
  Column c{std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1)};
  for (std::size_t t = 1; t < n; ++t) {
    if (missing[t - 1]) continue;
    c.values[t] = submeter[t - 1] > threshold_kwh ? 1.0 : 0.0;
    c.missing[t] = 0;
  }
  return c;
}

// --- matrix ------------------------------------------------------------------

std::vector<std::string> FeatureMatrix::column_names() const {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.name);
  return out;
}

long FeatureMatrix::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return static_cast<long>(i);
  }
  return -1;
}

FeatureMatrix FeatureMatrix::select(const std::vector<FeatureDescriptor>& subset) const {
  std::set<std::string> keep;
  for (const auto& d : subset) keep.insert(d.name);
  std::vector<std::size_t> idx;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (keep.count(parents[c])) idx.push_back(c);
  }
  if (idx.empty()) throw std::invalid_argument("column selection is empty");
  FeatureMatrix out;
  for (auto c : idx) {
    out.columns.push_back(columns[c]);
    out.parents.push_back(parents[c]);
  }
  out.households = households;
  out.row_household = row_household;
  out.row_hours = row_hours;
  out.target = target;
  out.values.resize(rows() * idx.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t j = 0; j < idx.size(); ++j) out.values[r * idx.size() + j] = at(r, idx[j]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows()) throw std::out_of_range("row slice out of range");
  FeatureMatrix out;
  out.columns = columns;
  out.parents = parents;
  out.households = households;
  out.row_household.assign(row_household.begin() + begin, row_household.begin() + end);
  out.row_hours.assign(row_hours.begin() + begin, row_hours.begin() + end);
  out.target.assign(target.begin() + begin, target.begin() + end);
  out.values.assign(values.begin() + begin * cols(), values.begin() + end * cols());
  return out;
}

std::vector<std::size_t> FeatureMatrix::household_rows(std::size_t household) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows(); ++r) {
    if (row_household[r] == household) out.push_back(r);
  }
  return out;
}

void FeatureMatrix::validate() const {
  const auto n = rows();
  if (parents.size() != columns.size()) throw std::invalid_argument("matrix parents/columns size mismatch");
  if (row_household.size() != n || row_hours.size() != n || values.size() != n * cols()) {
    throw std::invalid_argument("matrix row arrays disagree in size");
  }
  std::set<std::string> names;
  for (const auto& c : columns) {
    if (!names.insert(c.name).second) throw std::invalid_argument("duplicate column '" + c.name + "'");
  }
  for (auto h : row_household) {
    if (h >= households.size()) throw std::invalid_argument("row household index out of range");
  }
}

FeatureMatrix concat(const std::vector<FeatureMatrix>& parts) {
  FeatureMatrix out;
  if (parts.empty()) return out;
  out.columns = parts.front().columns;
  out.parents = parts.front().parents;
  for (const auto& p : parts) {
    if (p.columns != out.columns) throw std::invalid_argument("cannot concatenate matrices with different columns");
    std::vector<std::uint32_t> remap;
    for (const auto& h : p.households) {
      auto it = std::find(out.households.begin(), out.households.end(), h);
      if (it == out.households.end()) {
        out.households.push_back(h);
        remap.push_back(static_cast<std::uint32_t>(out.households.size() - 1));
      } else {
        remap.push_back(static_cast<std::uint32_t>(it - out.households.begin()));
      }
    }
    for (auto h : p.row_household) out.row_household.push_back(remap[h]);
    out.row_hours.insert(out.row_hours.end(), p.row_hours.begin(), p.row_hours.end());
    out.target.insert(out.target.end(), p.target.begin(), p.target.end());
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
  }
  return out;
}

namespace {

struct Recipe {
  std::vector<std::string> parts;
  const std::string& at(std::size_t i, const FeatureDescriptor& d) const {
    if (i >= parts.size()) throw std::invalid_argument("descriptor '" + d.name + "': malformed recipe");
    return parts[i];
  }
};

Recipe parse_recipe(const FeatureDescriptor& d) {
  Recipe r;
  for (auto p : csv::split(d.recipe, ':')) r.parts.emplace_back(p);
  if (d.recipe.empty()) throw std::invalid_argument("descriptor '" + d.name + "' has no recipe");
  return r;
}

int recipe_int(const std::string& s, const FeatureDescriptor& d) {
  auto v = csv::parse_int(s);
  if (!v) throw std::invalid_argument("descriptor '" + d.name + "': bad integer '" + s + "' in recipe");
  return static_cast<int>(*v);
}

// Per-hour string or number before one-hot expansion.
struct Cell {
  std::vector<double> num;
  std::vector<std::string> cat;
  std::vector<std::uint8_t> missing;
};

class ColumnBuilder {
 public:
  ColumnBuilder(const HourlyFrame& frame, const FeatureOptions& opt)
      : frame_(frame), opt_(opt), zone_(frame.timezone), n_(frame.size()) {
    // hours -1 .. n so the target hour t + 1 and day boundaries are available
    local_ = zone_.to_local_hours(frame.first_hour - 1, n_ + 2);
  }

  const LocalTime& target_local(std::size_t t) const { return local_[t + 2]; }

  Cell build(const FeatureDescriptor& d) {
    const auto r = parse_recipe(d);
    const auto& kind = r.at(0, d);
    if (kind == "target") return series_op(frame_.target_kwh, frame_.target_missing, r, 1, d);
    if (kind == "channel") {
      const auto* ch = frame_.channel(r.at(1, d));
      if (!ch) throw std::invalid_argument("descriptor '" + d.name + "': frame has no channel '" + r.at(1, d) + "'");
      return series_op(ch->values, ch->missing, r, 2, d);
    }
    if (kind == "calendar") return calendar(r.at(1, d), d);
    if (kind == "geo") return geo(r.at(1, d), d);
    if (kind == "solar") return solar(r.at(1, d), d);
    if (kind == "activity") return activity(r.at(1, d), d);
    if (kind == "yesterday") return yesterday(r.at(1, d), d);
    if (kind == "usage") return usage(r.at(1, d));
    if (kind == "attribute") return attribute(r.at(1, d), d);
    throw std::invalid_argument("descriptor '" + d.name + "': unknown recipe kind '" + kind + "'");
  }

 private:
  Cell numeric(Column c) { return {std::move(c.values), {}, std::move(c.missing)}; }

  Cell series_op(const std::vector<double>& s, const std::vector<std::uint8_t>& m, const Recipe& r,
                 std::size_t i, const FeatureDescriptor& d) {
    const auto& op = r.at(i, d);
    const int arg = r.parts.size() > i + 1 ? recipe_int(r.parts[i + 1], d) : opt_.rolling_window;
    if (op == "lag") return numeric(lag(s, m, arg));
    if (op == "rolling_mean") return numeric(rolling_stats(s, m, arg).mean);
    if (op == "rolling_std") return numeric(rolling_stats(s, m, arg).std);
    throw std::invalid_argument("descriptor '" + d.name + "': unknown series op '" + op + "'");
  }

  template <typename Fn>
  Cell per_hour_num(Fn&& fn) {
    Cell c{std::vector<double>(n_), {}, std::vector<std::uint8_t>(n_, 0)};
    for (std::size_t t = 0; t < n_; ++t) c.num[t] = fn(t);
    return c;
  }

  template <typename Fn>
  Cell per_hour_cat(Fn&& fn) {
    Cell c{{}, std::vector<std::string>(n_), std::vector<std::uint8_t>(n_, 0)};
    for (std::size_t t = 0; t < n_; ++t) c.cat[t] = fn(t);
    return c;
  }

  Cell calendar(const std::string& field, const FeatureDescriptor& d) {
    if (field == "timestamp_hours") {
      return per_hour_num([&](std::size_t t) { return static_cast<double>(frame_.hour(t) + 1); });
    }
    if (field == "part_of_day") return per_hour_cat([&](std::size_t t) { return part_of_day(target_local(t).hour); });
    double (*pick)(const CalendarFeatures&) = nullptr;
    if (field == "hour_of_day") pick = [](const CalendarFeatures& c) { return double(c.hour_of_day); };
    else if (field == "day_of_week") pick = [](const CalendarFeatures& c) { return double(c.day_of_week); };
    else if (field == "week_of_year") pick = [](const CalendarFeatures& c) { return double(c.week_of_year); };
    else if (field == "dst") pick = [](const CalendarFeatures& c) { return c.dst ? 1.0 : 0.0; };
    else if (field == "weekend") pick = [](const CalendarFeatures& c) { return c.weekend ? 1.0 : 0.0; };
    else if (field == "utc_offset") pick = [](const CalendarFeatures& c) { return c.utc_offset_hours; };
    else throw std::invalid_argument("descriptor '" + d.name + "': unknown calendar field '" + field + "'");
    return per_hour_num([&](std::size_t t) { return pick(calendar_features(target_local(t))); });
  }

  Cell geo(const std::string& field, const FeatureDescriptor& d) {
    if (field == "latitude") return per_hour_num([&](std::size_t) { return frame_.latitude; });
    if (field == "longitude") return per_hour_num([&](std::size_t) { return frame_.longitude; });
    if (field == "country") return per_hour_cat([&](std::size_t) { return frame_.country; });
    if (field == "region") return per_hour_cat([&](std::size_t) { return frame_.region; });
    if (field == "household_id") return per_hour_cat([&](std::size_t) { return frame_.household_id; });
    throw std::invalid_argument("descriptor '" + d.name + "': unknown geo field '" + field + "'");
  }

  Cell solar(const std::string& field, const FeatureDescriptor& d) {
    if (solar_.empty()) {
      solar_.reserve(n_);
      for (std::size_t t = 0; t < n_; ++t) {
        solar_.push_back(solar_features(frame_.hour(t) + 1, frame_.latitude, frame_.longitude));
      }
    }
    if (field == "altitude") return per_hour_num([&](std::size_t t) { return solar_[t].altitude_deg; });
    if (field == "azimuth") return per_hour_num([&](std::size_t t) { return solar_[t].azimuth_deg; });
    if (field == "radiation") return per_hour_num([&](std::size_t t) { return solar_[t].clear_sky_wm2; });
    throw std::invalid_argument("descriptor '" + d.name + "': unknown solar field '" + field + "'");
  }

  const HolidayCalendar& calendar_for_frame() {
    if (!holidays_) {
      const auto& region = opt_.holiday_region.empty() ? frame_.region : opt_.holiday_region;
      holidays_ = &HolidayCalendar::for_region(region);
      holidays_->require_coverage(local_.front().local_day - 1, local_.back().local_day + 1);
    }
    return *holidays_;
  }

  Cell activity(const std::string& field, const FeatureDescriptor& d) {
    const auto& cal = calendar_for_frame();
    if (field == "day_before_holiday") {
      return per_hour_num([&](std::size_t t) { return cal.is_holiday(target_local(t).local_day + 1) ? 1.0 : 0.0; });
    }
    if (field == "day_after_holiday") {
      return per_hour_num([&](std::size_t t) { return cal.is_holiday(target_local(t).local_day - 1) ? 1.0 : 0.0; });
    }
    static const std::set<std::string> kFlags = {"breakfast", "lunch",   "dinner",  "work",   "free_time",
                                                 "sleep",     "weekday", "weekend", "holiday"};
    if (!kFlags.count(field)) throw std::invalid_argument("descriptor '" + d.name + "': unknown activity '" + field + "'");
    return per_hour_num([&](std::size_t t) {
      const auto f = activity_flags(target_local(t), opt_.schedule, cal);
      bool v = false;
      if (field == "breakfast") v = f.breakfast;
      else if (field == "lunch") v = f.lunch;
      else if (field == "dinner") v = f.dinner;
      else if (field == "work") v = f.work;
      else if (field == "free_time") v = f.free_time;
      else if (field == "sleep") v = f.sleep;
      else if (field == "weekday") v = f.weekday;
      else if (field == "weekend") v = f.weekend;
      else v = f.holiday;
      return v ? 1.0 : 0.0;
    });
  }

  Cell yesterday(const std::string& field, const FeatureDescriptor& d) {
    if (!yesterday_) {
      std::vector<std::int64_t> days;
      days.reserve(local_.size());
      for (const auto& lt : local_) days.push_back(lt.local_day);
      yesterday_ = yesterday_stats(frame_.target_kwh, frame_.target_missing, days);
    }
    if (field == "median") return numeric(yesterday_->median);
    if (field == "ratio") return numeric(yesterday_->ratio);
    throw std::invalid_argument("descriptor '" + d.name + "': unknown yesterday statistic '" + field + "'");
  }

  // Sum of channels tagged with the activity; a household with no tagged
  // appliance never shows the activity.
  Cell usage(const std::string& tag) {
    std::vector<double> sum(n_, 0.0);
    std::vector<std::uint8_t> missing(n_, 0);
    for (const auto& ch : frame_.channels) {
      auto it = frame_.attributes.find("activity:" + ch.name);
      if (it == frame_.attributes.end() || it->second != tag) continue;
      for (std::size_t i = 0; i < n_; ++i) {
        sum[i] += ch.values[i];
        missing[i] |= ch.missing[i];
      }
    }
    return numeric(kitchen_activity(sum, missing, opt_.activity_threshold_kwh));
  }

  Cell attribute(const std::string& key, const FeatureDescriptor& d) {
    auto it = frame_.attributes.find(key);
    if (it == frame_.attributes.end()) {
      throw std::invalid_argument("descriptor '" + d.name + "': household '" + frame_.household_id +
                                  "' has no attribute '" + key + "'");
    }
    const std::string value = it->second;
    if (d.dtype == DType::Categorical) return per_hour_cat([&](std::size_t) { return value; });
    auto v = csv::parse_double(value);
    if (!v) {
      throw std::invalid_argument("descriptor '" + d.name + "': attribute '" + key + "' is not numeric: '" + value + "'");
    }
    return per_hour_num([&](std::size_t) { return *v; });
  }

  const HourlyFrame& frame_;
  const FeatureOptions& opt_;
  TimeZone zone_;
  std::size_t n_;
  std::vector<LocalTime> local_;
  std::vector<SolarFeatures> solar_;
  const HolidayCalendar* holidays_ = nullptr;
  std::optional<YesterdayColumns> yesterday_;
};

}  // namespace

RawColumns compute_columns(const HourlyFrame& frame, const std::vector<FeatureDescriptor>& descriptors,
                           const FeatureOptions& options) {
  options.validate();
  frame.validate();
  std::set<std::string> names;
  for (const auto& d : descriptors) {
    auto violations = validate_descriptor(d);
    if (!violations.empty()) {
      throw std::invalid_argument("descriptor '" + d.name + "' is invalid: " + violations.front().message);
    }
    if (!names.insert(d.name).second) throw std::invalid_argument("duplicate descriptor '" + d.name + "'");
  }
  ColumnBuilder builder(frame, options);
  RawColumns out;
  for (const auto& d : descriptors) {
    auto cell = builder.build(d);
    if (d.dtype != DType::Categorical) {
      if (!cell.cat.empty()) throw std::invalid_argument("descriptor '" + d.name + "' yields text; declare it categorical");
      out.columns.push_back(d);
      out.parents.push_back(d.name);
      out.data.push_back({std::move(cell.num), std::move(cell.missing)});
      continue;
    }
    if (cell.cat.empty()) throw std::invalid_argument("descriptor '" + d.name + "' yields numbers; it cannot be categorical");
    for (const auto& category : d.categories) {
      FeatureDescriptor child = d;
      child.name = d.name + "=" + category;
      child.dtype = DType::Boolean;
      child.unit = "dimensionless";
      child.categories.clear();
      Column col{std::vector<double>(frame.size(), 0.0), cell.missing};
      for (std::size_t t = 0; t < frame.size(); ++t) {
        if (!cell.missing[t] && cell.cat[t] == category) col.values[t] = 1.0;
      }
      out.columns.push_back(std::move(child));
      out.parents.push_back(d.name);
      out.data.push_back(std::move(col));
    }
  }
  return out;
}

FeatureMatrix assemble_matrix(const HourlyFrame& frame, const std::vector<FeatureDescriptor>& descriptors,
                              const FeatureOptions& options) {
  if (descriptors.empty()) throw std::invalid_argument("no descriptors to assemble");
  auto raw = compute_columns(frame, descriptors, options);
  const std::size_t n = frame.size();
  const std::size_t cols = raw.columns.size();

  FeatureMatrix m;
  m.columns = raw.columns;
  m.parents = raw.parents;
  m.households = {frame.household_id};
  std::size_t lost_target = 0;
  std::vector<std::size_t> lost_by_column(cols, 0);
  const auto begin = static_cast<std::size_t>(options.warmup_hours);
  for (std::size_t t = begin; t + 1 < n; ++t) {
    if (frame.target_missing[t + 1]) {
      ++lost_target;
      continue;
    }
    bool ok = true;
    for (std::size_t c = 0; c < cols; ++c) {
      if (raw.data[c].missing[t]) {
        ++lost_by_column[c];
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (std::size_t c = 0; c < cols; ++c) m.values.push_back(raw.data[c].values[t]);
    m.target.push_back(frame.target_kwh[t + 1]);
    m.row_hours.push_back(frame.hour(t));
    m.row_household.push_back(0);
  }
  if (m.rows() == 0) {
    std::ostringstream msg;
    msg << "household '" << frame.household_id << "': no rows survive (" << n << " hours, "
        << std::min(n, begin + 1) << " lost to warm-up and horizon, " << lost_target << " to missing targets";
    for (std::size_t c = 0; c < cols; ++c) {
      if (lost_by_column[c]) msg << ", " << lost_by_column[c] << " first missing in " << raw.columns[c].name;
    }
    msg << ")";
    throw std::runtime_error(msg.str());
  }
  return m;
}

void export_matrix(const FeatureMatrix& m, const std::string& csv_path, const std::string& json_path) {
  std::string out = "household,hour";
  for (const auto& c : m.columns) out += "," + c.name;
  out += ",target\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += m.households[m.row_household[r]];
    out += "," + std::to_string(m.row_hours[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) out += "," + csv::format_double(m.at(r, c));
    out += "," + csv::format_double(m.target[r]) + "\n";
  }
  csv::write_file(csv_path, out);

  nlohmann::json doc = nlohmann::json::object();
  nlohmann::json cols = nlohmann::json::array();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto& d = m.columns[c];
    cols.push_back({{"name", d.name},
                    {"group", std::string(to_string(d.group))},
                    {"taxonomy_path", d.taxonomy_path},
                    {"unit", d.unit},
                    {"parent", m.parents[c]}});
  }
  doc["columns"] = cols;
  doc["rows"] = m.rows();
  doc["households"] = m.households;
  doc["target"] = {{"name", "target"}, {"unit", "kWh"}, {"offset_hours", 1}};
  csv::write_file(json_path, doc.dump(2) + "\n");
}

}  // namespace gridfeat
