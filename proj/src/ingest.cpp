#include "gridfeat/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gridfeat/csv.hpp"

namespace gridfeat {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::int64_t kHour = 3600;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

enum class Aggregation { Integrate, Mean, Sum };

Aggregation aggregation_for(Unit unit) {
  switch (unit) {
    case Unit::Watt:
    case Unit::Kilowatt:
    case Unit::Kilovar: return Aggregation::Integrate;
    case Unit::Volt:
    case Unit::Ampere: return Aggregation::Mean;
    case Unit::WattHour:
    case Unit::KilowattHour: return Aggregation::Sum;
  }
  return Aggregation::Sum;
}

// Factor turning (reading x seconds) into kWh, or a reading into kWh for energy units.
double scale_for(Unit unit) {
  switch (unit) {
    case Unit::Watt: return 1.0 / 3.6e6;
    case Unit::Kilowatt:
    case Unit::Kilovar: return 1.0 / 3600.0;
    case Unit::WattHour: return 1.0 / 1000.0;
    case Unit::KilowattHour:
    case Unit::Volt:
    case Unit::Ampere: return 1.0;
  }
  return 1.0;
}

}  // namespace

Unit parse_unit(std::string_view text) {
  static constexpr std::pair<std::string_view, Unit> kUnits[] = {
      {"W", Unit::Watt},  {"kW", Unit::Kilowatt}, {"Wh", Unit::WattHour}, {"kWh", Unit::KilowattHour},
      {"V", Unit::Volt},  {"A", Unit::Ampere},    {"kvar", Unit::Kilovar}};
  for (const auto& [name, unit] : kUnits) {
    if (name == text) return unit;
  }
  throw std::invalid_argument("unknown unit '" + std::string(text) + "'");
}

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::Watt: return "W";
    case Unit::Kilowatt: return "kW";
    case Unit::WattHour: return "Wh";
    case Unit::KilowattHour: return "kWh";
    case Unit::Volt: return "V";
    case Unit::Ampere: return "A";
    case Unit::Kilovar: return "kvar";
  }
  return "?";
}

std::string_view hourly_unit(Unit unit) {
  switch (unit) {
    case Unit::Volt: return "V";
    case Unit::Ampere: return "A";
    case Unit::Kilovar: return "kvarh";
    default: return "kWh";
  }
}

void RawSeries::validate() const {
  if (timestamps.size() != values.size()) throw std::invalid_argument("raw series size mismatch");
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      throw std::invalid_argument("raw series timestamps must be strictly increasing");
    }
  }
  for (double v : values) {
    if (std::isinf(v)) throw std::invalid_argument("raw series contains an infinite value");
  }
  if (sample_interval_seconds <= 0) throw std::invalid_argument("sample interval must be positive");
}

HourlySeries resample_to_hourly(const RawSeries& series, int gap_limit_seconds) {
  series.validate();
  std::int64_t first = 0;
  std::int64_t last = -1;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (std::isnan(series.values[i])) continue;
    auto h = floor_div(series.timestamps[i], kHour);
    if (last < first) first = h;
    last = h;
  }
  if (last < first) return HourlySeries{};
  return resample_to_hourly(series, gap_limit_seconds, first,
                            static_cast<std::size_t>(last - first + 1));
}

HourlySeries resample_to_hourly(const RawSeries& series, int gap_limit_seconds,
                                std::int64_t first_hour, std::size_t hours) {
  series.validate();
  if (gap_limit_seconds <= 0) throw std::invalid_argument("gap limit must be positive");
  const auto agg = aggregation_for(series.unit);
  const double scale = scale_for(series.unit);
  const auto n_hours = static_cast<std::int64_t>(hours);

  std::vector<double> accum(hours, 0.0);
  std::vector<double> weight(hours, 0.0);
  std::vector<std::uint32_t> samples(hours, 0);
  std::vector<std::uint8_t> gap(hours, 0);

  auto in_range = [&](std::int64_t h) { return h >= first_hour && h < first_hour + n_hours; };
  auto mark_gap = [&](std::int64_t from, std::int64_t to) {  // seconds, half-open
    if (to <= from) return;
    for (auto h = floor_div(from, kHour); h <= floor_div(to - 1, kHour); ++h) {
      if (in_range(h)) gap[h - first_hour] = 1;
    }
  };

  std::vector<std::size_t> valid;
  valid.reserve(series.values.size());
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (!std::isnan(series.values[i])) valid.push_back(i);
  }

  for (std::size_t k = 0; k < valid.size(); ++k) {
    const auto i = valid[k];
    const std::int64_t t0 = series.timestamps[i];
    const std::int64_t t1 = k + 1 < valid.size() ? series.timestamps[valid[k + 1]]
                                                 : t0 + series.sample_interval_seconds;
    const double v = series.values[i];
    const auto h0 = floor_div(t0, kHour);
    if (in_range(h0)) ++samples[h0 - first_hour];

    if (k == 0) {
      // Uncovered lead-in of the first hour.
      const std::int64_t hour_start = h0 * kHour;
      if (t0 - hour_start > gap_limit_seconds) mark_gap(hour_start, t0);
    }
    if (k + 1 == valid.size()) {
      const std::int64_t hour_end = (floor_div(t1 - 1, kHour) + 1) * kHour;
      if (hour_end - t1 > gap_limit_seconds) mark_gap(t1, hour_end);
    }

    if (t1 - t0 > gap_limit_seconds) {
      mark_gap(t0, t1);
      continue;
    }
    if (agg == Aggregation::Sum) {
      if (in_range(h0)) accum[h0 - first_hour] += v * scale;
      continue;
    }
    // Zero-order hold over [t0, t1), split across hour boundaries.
    std::int64_t s = t0;
    while (s < t1) {
      const auto h = floor_div(s, kHour);
      const std::int64_t e = std::min(t1, (h + 1) * kHour);
      if (in_range(h)) {
        const double dt = static_cast<double>(e - s);
        accum[h - first_hour] += v * dt * scale;
        weight[h - first_hour] += dt;
      }
      s = e;
    }
  }

  HourlySeries out;
  out.first_hour = first_hour;
  out.values.assign(hours, 0.0);
  out.missing.assign(hours, 1);
  for (std::size_t h = 0; h < hours; ++h) {
    if (samples[h] == 0 || gap[h]) continue;
    if (agg == Aggregation::Mean) {
      if (weight[h] <= 0.0) continue;
      out.values[h] = accum[h] / weight[h];
    } else {
      out.values[h] = accum[h];
    }
    out.missing[h] = 0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// HourlyFrame

const Channel* HourlyFrame::channel(std::string_view name) const {
  for (const auto& c : channels) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::size_t HourlyFrame::observed_hours() const {
  return static_cast<std::size_t>(std::count(target_missing.begin(), target_missing.end(), 0));
}

void HourlyFrame::validate() const {
  const auto n = target_kwh.size();
  if (target_missing.size() != n) throw std::invalid_argument(household_id + ": mask size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (target_missing[i]) {
      if (target_kwh[i] != 0.0) throw std::invalid_argument(household_id + ": missing target carries a value");
    } else if (!(target_kwh[i] >= 0.0) || !std::isfinite(target_kwh[i])) {
      throw std::invalid_argument(household_id + ": target must be finite and >= 0");
    }
  }
  for (const auto& c : channels) {
    if (c.values.size() != n || c.missing.size() != n) {
      throw std::invalid_argument(household_id + ": channel '" + c.name + "' size mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (c.missing[i] && c.values[i] != 0.0) {
        throw std::invalid_argument(household_id + ": channel '" + c.name + "' missing entry carries a value");
      }
      if (!c.missing[i] && !std::isfinite(c.values[i])) {
        throw std::invalid_argument(household_id + ": channel '" + c.name + "' has a non-finite value");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Cache

namespace {

json encode_mask(const std::vector<std::uint8_t>& mask) {
  json runs = json::array();
  std::size_t i = 0;
  while (i < mask.size()) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < mask.size() && mask[j]) ++j;
    runs.push_back({i, j - i});
    i = j;
  }
  return runs;
}

std::vector<std::uint8_t> decode_mask(const json& runs, std::size_t n) {
  std::vector<std::uint8_t> mask(n, 0);
  for (const auto& r : runs) {
    auto start = r.at(0).get<std::size_t>();
    auto len = r.at(1).get<std::size_t>();
    if (start + len > n) throw std::runtime_error("cache mask run out of range");
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(start),
              mask.begin() + static_cast<std::ptrdiff_t>(start + len), 1);
  }
  return mask;
}

bool safe_id(const std::string& id) {
  return !id.empty() && id.find('/') == std::string::npos && id.find("..") == std::string::npos;
}

}  // namespace

void save_frame(const HourlyFrame& frame, const std::string& directory) {
  frame.validate();
  if (!safe_id(frame.household_id)) throw std::invalid_argument("bad household id '" + frame.household_id + "'");
  fs::create_directories(directory);

  std::string csv_text = "hour,target_kwh";
  for (const auto& c : frame.channels) csv_text += "," + c.name;
  csv_text += '\n';
  for (std::size_t i = 0; i < frame.size(); ++i) {
    csv_text += std::to_string(frame.hour(i));
    csv_text += ',';
    if (!frame.target_missing[i]) csv_text += csv::format_double(frame.target_kwh[i]);
    for (const auto& c : frame.channels) {
      csv_text += ',';
      if (!c.missing[i]) csv_text += csv::format_double(c.values[i]);
    }
    csv_text += '\n';
  }

  json side;
  side["household_id"] = frame.household_id;
  side["dataset"] = to_string(frame.dataset);
  side["timezone"] = frame.timezone;
  side["latitude"] = frame.latitude;
  side["longitude"] = frame.longitude;
  side["country"] = frame.country;
  side["region"] = frame.region;
  side["first_hour"] = frame.first_hour;
  side["hours"] = frame.size();
  side["units"] = json::object({{"target_kwh", "kWh"}});
  side["masks"] = json::object({{"target_kwh", encode_mask(frame.target_missing)}});
  side["channels"] = json::array();
  for (const auto& c : frame.channels) {
    side["units"][c.name] = c.unit;
    side["masks"][c.name] = encode_mask(c.missing);
    side["channels"].push_back({{"name", c.name}, {"unit", c.unit}, {"submeter", c.submeter}});
  }
  side["attributes"] = frame.attributes;

  const auto base = (fs::path(directory) / frame.household_id).string();
  csv::write_file(base + ".csv", csv_text);
  csv::write_file(base + ".json", side.dump(2) + "\n");
}

HourlyFrame load_frame(const std::string& directory, const std::string& household_id) {
  if (!safe_id(household_id)) throw std::invalid_argument("bad household id '" + household_id + "'");
  const auto base = (fs::path(directory) / household_id).string();
  const json side = json::parse(csv::read_file(base + ".json"));
  const std::string text = csv::read_file(base + ".csv");

  HourlyFrame f;
  f.household_id = side.at("household_id").get<std::string>();
  f.dataset = parse_dataset_id(side.at("dataset").get<std::string>());
  f.timezone = side.at("timezone").get<std::string>();
  f.latitude = side.at("latitude").get<double>();
  f.longitude = side.at("longitude").get<double>();
  f.country = side.at("country").get<std::string>();
  f.region = side.at("region").get<std::string>();
  f.first_hour = side.at("first_hour").get<std::int64_t>();
  const auto n = side.at("hours").get<std::size_t>();
  f.attributes = side.at("attributes").get<std::map<std::string, std::string>>();
  for (const auto& c : side.at("channels")) {
    Channel ch;
    ch.name = c.at("name").get<std::string>();
    ch.unit = c.at("unit").get<std::string>();
    ch.submeter = c.at("submeter").get<bool>();
    ch.values.assign(n, 0.0);
    ch.missing = decode_mask(side.at("masks").at(ch.name), n);
    f.channels.push_back(std::move(ch));
  }
  f.target_kwh.assign(n, 0.0);
  f.target_missing = decode_mask(side.at("masks").at("target_kwh"), n);

  std::size_t row = 0;
  bool header = true;
  csv::for_each_line(text, [&](std::string_view line) {
    if (line.empty()) return;
    if (header) {
      header = false;
      return;
    }
    if (row >= n) throw std::runtime_error(base + ".csv: more rows than the sidecar declares");
    auto fields = csv::split(line);
    if (fields.size() != 2 + f.channels.size()) throw std::runtime_error(base + ".csv: bad column count");
    auto hour = csv::parse_int(fields[0]);
    if (!hour || *hour != f.hour(row)) throw std::runtime_error(base + ".csv: hours are not contiguous");
    auto read = [&](std::string_view field, std::uint8_t missing, double& dst) {
      if (missing) return;
      auto v = csv::parse_double(field);
      if (!v) throw std::runtime_error(base + ".csv: unparsable value at row " + std::to_string(row));
      dst = *v;
    };
    read(fields[1], f.target_missing[row], f.target_kwh[row]);
    for (std::size_t c = 0; c < f.channels.size(); ++c) {
      read(fields[2 + c], f.channels[c].missing[row], f.channels[c].values[row]);
    }
    ++row;
  });
  if (row != n) throw std::runtime_error(base + ".csv: fewer rows than the sidecar declares");
  f.validate();
  return f;
}

std::vector<std::string> cached_households(const std::string& directory) {
  std::vector<std::string> out;
  if (!fs::is_directory(directory)) return out;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.path().extension() != ".json") continue;
    auto stem = entry.path().stem().string();
    if (fs::exists(entry.path().parent_path() / (stem + ".csv"))) out.push_back(stem);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gridfeat
