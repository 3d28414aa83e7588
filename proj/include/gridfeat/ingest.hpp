#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gridfeat/schema.hpp"

namespace gridfeat {

enum class Unit : std::uint8_t { Watt, Kilowatt, WattHour, KilowattHour, Volt, Ampere, Kilovar };

/// Throws std::invalid_argument for anything other than W, kW, Wh, kWh, V, A, kvar.
Unit parse_unit(std::string_view text);
std::string_view to_string(Unit unit);

/// Unit of the hourly aggregate produced from a raw series of `unit`.
std::string_view hourly_unit(Unit unit);

/// Irregularly sampled meter readings.
struct RawSeries {
  std::vector<std::int64_t> timestamps;  // UTC epoch seconds, strictly increasing
  std::vector<double> values;            // NaN marks an explicitly missing reading
  Unit unit = Unit::Watt;
  int sample_interval_seconds = 60;  // how long the final reading is held

  /// Throws std::invalid_argument on size mismatch, unsorted/duplicate
  /// timestamps or infinite values.
  void validate() const;
};

struct HourlySeries {
  std::int64_t first_hour = 0;  // epoch hour index (UTC seconds / 3600)
  std::vector<double> values;   // 0 where missing
  std::vector<std::uint8_t> missing;

  std::size_t size() const { return values.size(); }
};

/// Hourly aggregation of a raw series.
///
/// Power (W, kW, kvar) and level (V, A) readings are held until the next
/// reading (zero-order hold); power integrates to kWh / kvarh, levels become
/// the time-weighted hourly mean. Energy readings (Wh, kWh) are summed into
/// the hour containing their timestamp. An hour is missing when it contains
/// no reading or overlaps a spacing between consecutive readings longer than
/// `gap_limit_seconds`.
HourlySeries resample_to_hourly(const RawSeries& series, int gap_limit_seconds = 900);

/// Same, over a caller-chosen hour range [first_hour, first_hour + hours).
HourlySeries resample_to_hourly(const RawSeries& series, int gap_limit_seconds,
                                std::int64_t first_hour, std::size_t hours);

struct Channel {
  std::string name;
  std::string unit;
  bool submeter = false;
  std::vector<double> values;  // 0 where missing
  std::vector<std::uint8_t> missing;

  bool operator==(const Channel&) const = default;
};

/// Per-household contiguous hourly grid.
struct HourlyFrame {
  std::string household_id;
  DatasetId dataset = DatasetId::Synthetic;
  std::string timezone = "UTC";
  double latitude = 0.0;
  double longitude = 0.0;
  std::string country;
  std::string region;
  std::int64_t first_hour = 0;
  std::vector<double> target_kwh;  // 0 where missing
  std::vector<std::uint8_t> target_missing;
  std::vector<Channel> channels;
  std::map<std::string, std::string> attributes;  // static metadata, e.g. building type

  std::size_t size() const { return target_kwh.size(); }
  std::int64_t hour(std::size_t i) const { return first_hour + static_cast<std::int64_t>(i); }
  const Channel* channel(std::string_view name) const;
  std::size_t observed_hours() const;

  /// Throws std::invalid_argument when sizes disagree, a target is negative,
  /// or a missing entry carries a non-zero value.
  void validate() const;

  bool operator==(const HourlyFrame&) const = default;
};

// --- household-frame cache: <dir>/<household>.csv plus <household>.json ----

void save_frame(const HourlyFrame& frame, const std::string& directory);
HourlyFrame load_frame(const std::string& directory, const std::string& household_id);
/// Household ids with a cache sidecar in `directory`, sorted.
std::vector<std::string> cached_households(const std::string& directory);

// --- raw dataset adapters ---------------------------------------------------

struct LoadOptions {
  int gap_limit_seconds = 900;
  double malformed_tolerance = 0.01;  // fraction of rows per file that may be skipped
};

struct LoadReport {
  std::size_t rows = 0;
  std::size_t malformed = 0;
};

/// Reads one of the documented raw layouts (see README) into one frame per
/// household. Missing files are hard errors naming the file; malformed rows
/// beyond the tolerance fraction fail the load.
std::vector<HourlyFrame> load_dataset(const DatasetDescriptor& descriptor,
                                      const std::string& root_path,
                                      const LoadOptions& options = {},
                                      LoadReport* report = nullptr);

/// Appliance name keywords used to tag REFIT appliance channels with an activity.
std::string activity_for_appliance(std::string_view appliance_name);

// --- synthetic households ---------------------------------------------------

struct SynthSpec {
  std::uint64_t seed = 7;
  int days = 90;
  std::int64_t start_day = 16071;  // 2014-01-01, days since epoch, local midnight in UTC
  double base_load_kwh = 0.8;
  std::array<double, 24> daily_profile = {0.55, 0.5, 0.45, 0.45, 0.45, 0.5, 0.8, 1.1,
                                          1.1,  0.9, 0.8,  0.85, 0.95, 0.9, 0.85, 0.9,
                                          1.0,  1.2, 1.5,  1.6,  1.5,  1.3, 1.0, 0.7};
  double weekly_weekend_factor = 1.25;
  double meal_spike_kwh = 1.0;
  double noise_std_kwh = 0.05;
  /// Persistent household-level state: an AR(1) offset added to the base
  /// load, so recent consumption carries information about the next hour.
  double level_persistence = 0.985;
  double level_std = 0.25;  // stationary std of the level process

  /// Throws std::invalid_argument if days < 21 or any magnitude is negative.
  void validate() const;
};

/// Exact generative weights, so tests know which groups carry signal.
struct GroundTruth {
  SynthSpec spec;
  std::vector<double> level;          // per hour, level process value
  std::vector<double> expected_kwh;   // per hour, noise-free target before clipping
  std::vector<std::uint8_t> meal;     // per hour, meal-window indicator
  std::vector<FeatureGroup> signal_groups;  // groups whose features can explain variance
};

struct SynthResult {
  HourlyFrame frame;
  GroundTruth truth;
};

/// target = (base + level) * profile[hour] * weekend_factor^weekend
///          + meal_spike * meal_window + noise, clipped at 0.
/// Also emits a "kitchen" submeter channel carrying the meal energy.
SynthResult synth_household(const SynthSpec& spec);

}  // namespace gridfeat
