// Raw dataset adapters. Layouts are documented in the README.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "gridfeat/csv.hpp"
#include "gridfeat/ingest.hpp"
#include "gridfeat/parallel.hpp"
#include "gridfeat/timezone.hpp"

namespace gridfeat {
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Header {
 public:
  Header(std::string_view line, char delim, std::string file) : file_(std::move(file)) {
    auto fields = csv::split(line, delim);
    for (std::size_t i = 0; i < fields.size(); ++i) index_[std::string(csv::trim(fields[i]))] = i;
  }
  std::size_t require(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::runtime_error(file_ + ": missing column '" + name + "'");
    return it->second;
  }
  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::string file_;
  std::map<std::string, std::size_t> index_;
};

std::ifstream open_or_throw(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing dataset file: " + path.string());
  return in;
}

void check_tolerance(const std::string& file, std::size_t malformed, std::size_t rows,
                     double tolerance) {
  if (rows == 0) throw std::runtime_error(file + ": no data rows");
  if (static_cast<double>(malformed) > tolerance * static_cast<double>(rows)) {
    throw std::runtime_error(file + ": " + std::to_string(malformed) + " of " + std::to_string(rows) +
                             " rows malformed (tolerance " + std::to_string(tolerance) + ")");
  }
}

// Caches local-hour -> UTC conversions; the tz switch is comparatively expensive.
class LocalHourResolver {
 public:
  explicit LocalHourResolver(const TimeZone& zone) : zone_(zone) {}

  std::optional<std::int64_t> resolve(int y, int m, int d, int h, Ambiguity ambiguity) {
    const auto key = (days_from_civil(y, m, d) * 24 + h) * 2 + (ambiguity == Ambiguity::Later ? 1 : 0);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto utc = zone_.from_local(y, m, d, h, 0, 0, ambiguity);
    cache_.emplace(key, utc);
    return utc;
  }

 private:
  const TimeZone& zone_;
  std::unordered_map<std::int64_t, std::optional<std::int64_t>> cache_;
};

struct Ymd {
  int y, m, d;
};

std::optional<Ymd> parse_iso_date(std::string_view s) {
  s = csv::trim(s);
  auto parts = csv::split(s, '-');
  if (parts.size() != 3) return std::nullopt;
  auto y = csv::parse_int(parts[0]), m = csv::parse_int(parts[1]), d = csv::parse_int(parts[2]);
  if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
  return Ymd{static_cast<int>(*y), static_cast<int>(*m), static_cast<int>(*d)};
}

std::optional<Ymd> parse_dmy_date(std::string_view s) {
  auto parts = csv::split(csv::trim(s), '/');
  if (parts.size() != 3) return std::nullopt;
  auto d = csv::parse_int(parts[0]), m = csv::parse_int(parts[1]), y = csv::parse_int(parts[2]);
  if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
  return Ymd{static_cast<int>(*y), static_cast<int>(*m), static_cast<int>(*d)};
}

// Grid of per-hour values keyed by UTC epoch hour.
struct HourMap {
  std::map<std::int64_t, double> values;
};

HourlySeries to_series(const HourMap& map, std::int64_t first, std::size_t n) {
  HourlySeries s;
  s.first_hour = first;
  s.values.assign(n, 0.0);
  s.missing.assign(n, 1);
  for (const auto& [h, v] : map.values) {
    if (h < first || h >= first + static_cast<std::int64_t>(n) || std::isnan(v)) continue;
    s.values[h - first] = v;
    s.missing[h - first] = 0;
  }
  return s;
}

Channel make_channel(std::string name, std::string unit, bool submeter, const HourlySeries& s) {
  Channel c;
  c.name = std::move(name);
  c.unit = std::move(unit);
  c.submeter = submeter;
  c.values = s.values;
  c.missing = s.missing;
  return c;
}

HourlyFrame base_frame(const DatasetDescriptor& d, std::string id) {
  HourlyFrame f;
  f.household_id = std::move(id);
  f.dataset = d.id;
  f.timezone = d.timezone;
  f.latitude = d.latitude;
  f.longitude = d.longitude;
  f.country = d.country;
  f.region = d.region;
  return f;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// --- HUE ---------------------------------------------------------------------

struct HueWeather {
  HourMap temperature, humidity, pressure, cloud_cover;
};

std::optional<double> cloud_from_description(std::string_view text) {
  const auto w = lower(csv::trim(text));
  if (w.empty()) return std::nullopt;
  if (w.find("mainly clear") != std::string::npos) return 25.0;
  if (w.find("mostly cloudy") != std::string::npos) return 75.0;
  if (w.find("clear") != std::string::npos) return 0.0;
  for (const char* k : {"cloudy", "rain", "snow", "drizzle", "fog", "shower", "thunder", "overcast", "haze"}) {
    if (w.find(k) != std::string::npos) return 100.0;
  }
  return std::nullopt;
}

HueWeather load_hue_weather(const fs::path& path, const TimeZone& zone, const LoadOptions& opt,
                            LoadReport& report) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Header header(line, ',', path.string());
  const auto c_date = header.require("date"), c_hour = header.require("hour");
  const auto c_temp = header.require("temperature"), c_hum = header.require("humidity");
  const auto c_pres = header.require("pressure");
  const auto c_weather = header.find("weather");
  const auto c_cloud = header.find("cloud_cover");

  LocalHourResolver resolver(zone);
  HueWeather w;
  std::set<std::int64_t> seen;
  std::size_t rows = 0, malformed = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++rows;
    auto f = csv::split(line);
    auto date = f.size() > c_date ? parse_iso_date(f[c_date]) : std::nullopt;
    auto hour = f.size() > c_hour ? csv::parse_int(f[c_hour]) : std::nullopt;
    if (!date || !hour || *hour < 0 || *hour > 23) {
      ++malformed;
      continue;
    }
    auto utc = resolver.resolve(date->y, date->m, date->d, static_cast<int>(*hour), Ambiguity::Earlier);
    if (utc && seen.count(*utc / 3600)) {
      utc = resolver.resolve(date->y, date->m, date->d, static_cast<int>(*hour), Ambiguity::Later);
    }
    if (!utc || seen.count(*utc / 3600)) continue;
    const auto h = *utc / 3600;
    seen.insert(h);
    auto field = [&](std::size_t c) { return c < f.size() ? csv::parse_double(f[c]) : std::nullopt; };
    if (auto v = field(c_temp)) w.temperature.values[h] = *v;
    if (auto v = field(c_hum)) w.humidity.values[h] = *v;
    if (auto v = field(c_pres)) w.pressure.values[h] = *v;
    std::optional<double> cloud;
    if (c_cloud) cloud = field(*c_cloud);
    if (!cloud && c_weather && *c_weather < f.size()) cloud = cloud_from_description(f[*c_weather]);
    if (cloud) w.cloud_cover.values[h] = *cloud;
  }
  check_tolerance(path.string(), malformed, rows, opt.malformed_tolerance);
  report.rows += rows;
  report.malformed += malformed;
  return w;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    return std::nullopt;
  }
};

CsvTable read_table(const fs::path& path) {
  auto in = open_or_throw(path);
  CsvTable t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    for (auto f : csv::split(line)) fields.emplace_back(csv::trim(f));
    if (header) {
      t.columns = std::move(fields);
      header = false;
    } else {
      fields.resize(t.columns.size());
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

const std::vector<std::pair<std::string, std::string>>& hue_hvac_columns() {
  // metadata column -> attribute name
  static const std::vector<std::pair<std::string, std::string>> kColumns = {
      {"air_conditioning", "hvac_air_conditioning"}, {"gas_furnace", "hvac_gas_furnace"},
      {"heat_pump", "hvac_heat_pump"},               {"gas_fireplace", "hvac_gas_fireplace"},
      {"electric_fireplace", "hvac_electric_fireplace"}, {"in_floor_heating", "hvac_in_floor_heating"},
      {"portable_ac", "hvac_portable_ac"},           {"cast_iron_radiators", "hvac_cast_iron_radiators"},
      {"geothermal", "hvac_geothermal"}};
  return kColumns;
}

std::string numeric_or_zero(const std::string& s) {
  return csv::parse_double(s) ? s : std::string("0");
}

std::vector<HourlyFrame> load_hue(const DatasetDescriptor& d, const fs::path& root,
                                  const LoadOptions& opt, LoadReport& report) {
  const TimeZone zone(d.timezone);
  const auto meta = read_table(root / "Residential_Info.csv");
  const auto c_id = meta.column("house_id");
  const auto c_station = meta.column("weather_station");
  if (!c_id || !c_station) {
    throw std::runtime_error((root / "Residential_Info.csv").string() + ": needs house_id and weather_station columns");
  }
  std::map<std::string, const std::vector<std::string>*> by_id;
  for (const auto& r : meta.rows) by_id[r[*c_id]] = &r;

  std::vector<std::string> ids = d.household_ids;
  if (ids.empty()) {
    for (const auto& [id, _] : by_id) ids.push_back(id);
  }

  std::map<std::string, HueWeather> weather;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::runtime_error("household '" + id + "' not in Residential_Info.csv");
    const auto& station = (*it->second)[*c_station];
    if (!weather.count(station)) {
      weather[station] = load_hue_weather(root / ("Weather_" + station + ".csv"), zone, opt, report);
    }
  }

  std::vector<HourlyFrame> frames(ids.size());
  std::vector<LoadReport> reports(ids.size());
  std::mutex mtx;
  parallel_for(ids.size(), default_jobs(), [&](std::size_t k) {
    const auto& id = ids[k];
    const auto& row = *by_id.at(id);
    const auto path = root / ("Residential_" + id + ".csv");
    auto in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Header header(line, ',', path.string());
    const auto c_date = header.require("date"), c_hour = header.require("hour");
    const auto c_energy = header.require("energy_kWh");

    LocalHourResolver resolver(zone);
    HourMap energy;
    std::size_t rows = 0, malformed = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      ++rows;
      auto f = csv::split(line);
      auto date = f.size() > c_date ? parse_iso_date(f[c_date]) : std::nullopt;
      auto hour = f.size() > c_hour ? csv::parse_int(f[c_hour]) : std::nullopt;
      auto kwh = f.size() > c_energy ? csv::parse_double(f[c_energy]) : std::nullopt;
      if (!date || !hour || *hour < 0 || *hour > 23 || !kwh || *kwh < 0.0 || !std::isfinite(*kwh)) {
        ++malformed;
        continue;
      }
      auto utc = resolver.resolve(date->y, date->m, date->d, static_cast<int>(*hour), Ambiguity::Earlier);
      if (utc && energy.values.count(*utc / 3600)) {
        utc = resolver.resolve(date->y, date->m, date->d, static_cast<int>(*hour), Ambiguity::Later);
      }
      if (!utc || energy.values.count(*utc / 3600)) continue;
      energy.values[*utc / 3600] = *kwh;
    }
    check_tolerance(path.string(), malformed, rows, opt.malformed_tolerance);
    reports[k] = {rows, malformed};

    if (energy.values.empty()) throw std::runtime_error(path.string() + ": no usable readings");
    const auto first = energy.values.begin()->first;
    const auto n = static_cast<std::size_t>(energy.values.rbegin()->first - first + 1);
    auto frame = base_frame(d, id);
    frame.first_hour = first;
    auto target = to_series(energy, first, n);
    frame.target_kwh = target.values;
    frame.target_missing = target.missing;

    const auto& w = weather.at(row[*c_station]);
    frame.channels.push_back(make_channel("temperature", "°C", false, to_series(w.temperature, first, n)));
    frame.channels.push_back(make_channel("humidity", "%", false, to_series(w.humidity, first, n)));
    frame.channels.push_back(make_channel("pressure", "kPa", false, to_series(w.pressure, first, n)));
    frame.channels.push_back(make_channel("cloud_cover", "%", false, to_series(w.cloud_cover, first, n)));

    auto attr = [&](const char* col) -> std::string {
      auto c = meta.column(col);
      return c ? row[*c] : std::string{};
    };
    frame.attributes["weather_station"] = row[*c_station];
    frame.attributes["building_type"] = attr("house_type").empty() ? "unknown" : attr("house_type");
    frame.attributes["orientation"] = attr("facing").empty() ? "unknown" : attr("facing");
    frame.attributes["rental_units"] = numeric_or_zero(attr("rental_units"));
    frame.attributes["ev_battery_kwh"] = numeric_or_zero(attr("ev_battery_kwh"));
    frame.attributes["ev_owner"] = *csv::parse_double(frame.attributes["ev_battery_kwh"]) > 0 ? "1" : "0";
    for (const auto& [col, name] : hue_hvac_columns()) frame.attributes[name] = numeric_or_zero(attr(col.c_str()));
    frame.validate();
    std::lock_guard lock(mtx);
    frames[k] = std::move(frame);
  });
  for (const auto& r : reports) {
    report.rows += r.rows;
    report.malformed += r.malformed;
  }
  return frames;
}

// --- UCI ---------------------------------------------------------------------

std::vector<HourlyFrame> load_uci(const DatasetDescriptor& d, const fs::path& root,
                                  const LoadOptions& opt, LoadReport& report) {
  const TimeZone zone(d.timezone);
  const auto path = root / "household_power_consumption.txt";
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Header header(line, ';', path.string());
  static const char* kColumns[] = {"Global_active_power", "Global_reactive_power", "Voltage",
                                   "Global_intensity",    "Sub_metering_1",        "Sub_metering_2",
                                   "Sub_metering_3"};
  static const Unit kUnits[] = {Unit::Kilowatt, Unit::Kilovar,  Unit::Volt,    Unit::Ampere,
                                Unit::WattHour, Unit::WattHour, Unit::WattHour};
  const auto c_date = header.require("Date"), c_time = header.require("Time");
  std::size_t cols[7];
  for (int i = 0; i < 7; ++i) cols[i] = header.require(kColumns[i]);

  std::vector<RawSeries> raw(7);
  for (int i = 0; i < 7; ++i) {
    raw[i].unit = kUnits[i];
    raw[i].sample_interval_seconds = d.native_interval_seconds;
  }
  LocalHourResolver resolver(zone);
  std::int64_t last_ts = std::numeric_limits<std::int64_t>::min();
  std::size_t rows = 0, malformed = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++rows;
    auto f = csv::split(line, ';');
    if (f.size() < header.require("Sub_metering_3") + 1) {
      ++malformed;
      continue;
    }
    auto date = parse_dmy_date(f[c_date]);
    auto tparts = csv::split(csv::trim(f[c_time]), ':');
    if (!date || tparts.size() != 3) {
      ++malformed;
      continue;
    }
    auto hh = csv::parse_int(tparts[0]), mm = csv::parse_int(tparts[1]), ss = csv::parse_int(tparts[2]);
    if (!hh || !mm || !ss || *hh < 0 || *hh > 23 || *mm < 0 || *mm > 59 || *ss < 0 || *ss > 59) {
      ++malformed;
      continue;
    }
    const auto offset = *mm * 60 + *ss;
    auto utc = resolver.resolve(date->y, date->m, date->d, static_cast<int>(*hh), Ambiguity::Earlier);
    if (utc && *utc + offset <= last_ts) {
      utc = resolver.resolve(date->y, date->m, date->d, static_cast<int>(*hh), Ambiguity::Later);
    }
    if (!utc || *utc + offset <= last_ts) continue;
    double values[7];
    bool bad = false;
    for (int i = 0; i < 7; ++i) {
      auto field = csv::trim(f[cols[i]]);
      if (field == "?" || field.empty()) {
        values[i] = kNaN;
        continue;
      }
      auto v = csv::parse_double(field);
      if (!v || !std::isfinite(*v)) {
        bad = true;
        break;
      }
      values[i] = *v;
    }
    if (bad) {
      ++malformed;
      continue;
    }
    last_ts = *utc + offset;
    for (int i = 0; i < 7; ++i) {
      raw[i].timestamps.push_back(last_ts);
      raw[i].values.push_back(values[i]);
    }
  }
  check_tolerance(path.string(), malformed, rows, opt.malformed_tolerance);
  report.rows += rows;
  report.malformed += malformed;

  auto target = resample_to_hourly(raw[0], opt.gap_limit_seconds);
  if (target.size() == 0) throw std::runtime_error(path.string() + ": no usable readings");
  auto frame = base_frame(d, d.household_ids.empty() ? std::string("uci") : d.household_ids.front());
  frame.first_hour = target.first_hour;
  frame.target_kwh = target.values;
  frame.target_missing = target.missing;
  const char* names[] = {nullptr, "reactive_kvarh", "voltage_v", "intensity_a",
                         "submeter_1", "submeter_2", "submeter_3"};
  for (int i = 1; i < 7; ++i) {
    auto s = resample_to_hourly(raw[i], opt.gap_limit_seconds, target.first_hour, target.size());
    frame.channels.push_back(make_channel(names[i], std::string(hourly_unit(kUnits[i])), i >= 4, s));
  }
  frame.attributes["activity:submeter_1"] = "kitchen";
  frame.attributes["activity:submeter_2"] = "cleaning";
  frame.attributes["activity:submeter_3"] = "heating";
  frame.validate();
  return {frame};
}

// --- REFIT -------------------------------------------------------------------

std::vector<HourlyFrame> load_refit(const DatasetDescriptor& d, const fs::path& root,
                                    const LoadOptions& opt, LoadReport& report) {
  const auto meta = read_table(root / "refit_metadata.csv");
  const auto c_id = meta.column("house_id");
  if (!c_id) throw std::runtime_error((root / "refit_metadata.csv").string() + ": needs a house_id column");
  std::map<std::string, const std::vector<std::string>*> by_id;
  for (const auto& r : meta.rows) by_id[r[*c_id]] = &r;
  std::vector<std::string> ids = d.household_ids;
  if (ids.empty()) {
    for (const auto& [id, _] : by_id) ids.push_back(id);
  }

  std::vector<HourlyFrame> frames(ids.size());
  std::vector<LoadReport> reports(ids.size());
  parallel_for(ids.size(), default_jobs(), [&](std::size_t k) {
    const auto& id = ids[k];
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::runtime_error("household '" + id + "' not in refit_metadata.csv");
    const auto& row = *it->second;
    const auto path = root / ("CLEAN_House" + id + ".csv");
    auto in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Header header(line, ',', path.string());
    const auto c_unix = header.require("Unix"), c_agg = header.require("Aggregate");
    std::vector<std::size_t> c_app;
    for (int a = 1; a <= 9; ++a) c_app.push_back(header.require("Appliance" + std::to_string(a)));
    const auto max_col = std::max(std::max(c_unix, c_agg), *std::max_element(c_app.begin(), c_app.end()));

    std::vector<RawSeries> raw(10);
    for (auto& r : raw) {
      r.unit = Unit::Watt;
      r.sample_interval_seconds = d.native_interval_seconds;
    }
    std::int64_t last_ts = std::numeric_limits<std::int64_t>::min();
    std::size_t rows = 0, malformed = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      ++rows;
      auto f = csv::split(line);
      if (f.size() <= max_col) {
        ++malformed;
        continue;
      }
      auto ts = csv::parse_int(f[c_unix]);
      if (!ts) {
        ++malformed;
        continue;
      }
      if (*ts <= last_ts) continue;
      double values[10];
      bool bad = false;
      for (int i = 0; i < 10; ++i) {
        auto v = csv::parse_double(f[i == 0 ? c_agg : c_app[i - 1]]);
        if (!v || !std::isfinite(*v)) {
          bad = true;
          break;
        }
        values[i] = *v;
      }
      if (bad) {
        ++malformed;
        continue;
      }
      last_ts = *ts;
      for (int i = 0; i < 10; ++i) {
        raw[i].timestamps.push_back(*ts);
        raw[i].values.push_back(values[i]);
      }
    }
    check_tolerance(path.string(), malformed, rows, opt.malformed_tolerance);
    reports[k] = {rows, malformed};

    auto target = resample_to_hourly(raw[0], opt.gap_limit_seconds);
    if (target.size() == 0) throw std::runtime_error(path.string() + ": no usable readings");
    auto frame = base_frame(d, id);
    frame.first_hour = target.first_hour;
    frame.target_kwh = target.values;
    frame.target_missing = target.missing;
    for (int a = 1; a <= 9; ++a) {
      auto s = resample_to_hourly(raw[a], opt.gap_limit_seconds, target.first_hour, target.size());
      const auto name = "appliance_" + std::to_string(a);
      frame.channels.push_back(make_channel(name, "kWh", true, s));
      auto col = meta.column(name);
      const std::string appliance = col ? row[*col] : std::string{};
      frame.attributes["appliance:" + name] = appliance;
      auto activity = activity_for_appliance(appliance);
      if (!activity.empty()) frame.attributes["activity:" + name] = activity;
    }
    auto attr = [&](const char* col, const char* fallback) -> std::string {
      auto c = meta.column(col);
      return (c && !row[*c].empty()) ? row[*c] : std::string(fallback);
    };
    frame.attributes["residents"] = numeric_or_zero(attr("residents", "0"));
    frame.attributes["building_type"] = attr("building_type", "unknown");
    frame.attributes["household_size"] = numeric_or_zero(attr("household_size", "0"));
    frame.attributes["appliances_owned"] = numeric_or_zero(attr("appliances_owned", "0"));
    frame.attributes["construction_year"] = numeric_or_zero(attr("construction_year", "0"));
    frame.validate();
    frames[k] = std::move(frame);
  });
  for (const auto& r : reports) {
    report.rows += r.rows;
    report.malformed += r.malformed;
  }
  return frames;
}

}  // namespace

std::string activity_for_appliance(std::string_view appliance_name) {
  const auto name = lower(appliance_name);
  struct Rule {
    const char* keyword;
    const char* activity;
  };
  // First match wins; more specific keywords come first.
  static constexpr Rule kRules[] = {
      {"dishwasher", "kitchen"},       {"kettle", "kitchen"},         {"toaster", "kitchen"},
      {"microwave", "kitchen"},        {"oven", "kitchen"},           {"cooker", "kitchen"},
      {"hob", "kitchen"},              {"food mixer", "kitchen"},     {"bread", "kitchen"},
      {"hair", "grooming"},            {"straightener", "grooming"},  {"shower", "grooming"},
      {"washer", "cleaning"},          {"washing machine", "cleaning"}, {"dryer", "cleaning"},
      {"vacuum", "cleaning"},          {"iron", "cleaning"},          {"television", "entertainment"},
      {"tv", "entertainment"},         {"games", "entertainment"},    {"hi-fi", "entertainment"},
      {"audio", "entertainment"},      {"dvd", "entertainment"},      {"computer", "work_at_home"},
      {"desktop", "work_at_home"},     {"laptop", "work_at_home"},    {"printer", "work_at_home"},
      {"office", "work_at_home"},      {"heater", "heating"},         {"immersion", "heating"},
      {"dehumidifier", "heating"},     {"bedroom", "bedroom"},        {"lamp", "bedroom"}};
  for (const auto& r : kRules) {
    if (name.find(r.keyword) != std::string::npos) return r.activity;
  }
  return {};
}

std::vector<HourlyFrame> load_dataset(const DatasetDescriptor& descriptor, const std::string& root_path,
                                      const LoadOptions& options, LoadReport* report) {
  descriptor.validate();
  if (descriptor.id == DatasetId::Synthetic) {
    throw std::invalid_argument("synthetic households are generated with synth_household, not loaded");
  }
  const fs::path root(root_path);
  if (!fs::is_directory(root)) throw std::runtime_error("dataset root does not exist: " + root_path);
  LoadReport local;
  std::vector<HourlyFrame> frames;
  switch (descriptor.id) {
    case DatasetId::Hue: frames = load_hue(descriptor, root, options, local); break;
    case DatasetId::Uci: frames = load_uci(descriptor, root, options, local); break;
    case DatasetId::Refit: frames = load_refit(descriptor, root, options, local); break;
    case DatasetId::Synthetic: break;
  }
  if (report) *report = local;
  return frames;
}

}  // namespace gridfeat
