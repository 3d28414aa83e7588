#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridfeat/holidays.hpp"
#include "gridfeat/ingest.hpp"
#include "gridfeat/schema.hpp"
#include "gridfeat/timezone.hpp"

namespace gridfeat {

// Row convention: row t of a frame is the forecast issued for hour t + 1.
// Measured inputs may use hours <= t - 1; calendar, schedule and solar
// columns describe the target hour t + 1 (known ahead of time).

/// Local-time windows, half-open [start, end); start > end wraps midnight.
struct ScheduleTable {
  struct Window {
    int start = 0;
    int end = 0;
    bool contains(int hour) const {
      return start <= end ? (hour >= start && hour < end) : (hour >= start || hour < end);
    }
    bool operator==(const Window&) const = default;
  };
  std::map<std::string, Window> windows;

  /// breakfast [6,9), lunch [11,15), dinner [18,21), work [9,17),
  /// free_time [17,22), sleep [22,7).
  static ScheduleTable defaults();

  /// Throws std::out_of_range for unknown window names.
  bool active(const std::string& window, int local_hour) const;
  /// Throws std::invalid_argument unless every default window is present with hours in [0, 24].
  void validate() const;
  bool operator==(const ScheduleTable&) const = default;
};

/// A per-hour column with a missing mask; values are 0 where missing.
struct Column {
  std::vector<double> values;
  std::vector<std::uint8_t> missing;
  std::size_t size() const { return values.size(); }
};

/// column[t] = series[t - k]. Throws std::invalid_argument for k < 1.
Column lag(const std::vector<double>& series, const std::vector<std::uint8_t>& missing, int k);

struct RollingColumns {
  Column mean;
  Column std;  // population
};

/// Trailing window over hours [t - W, t - 1]; missing unless all W hours are observed.
/// Throws std::invalid_argument for W < 2.
RollingColumns rolling_stats(const std::vector<double>& series, const std::vector<std::uint8_t>& missing,
                             int window);

struct CalendarFeatures {
  int hour_of_day;
  int day_of_week;  // 0 = Monday
  int week_of_year;
  std::string part_of_day;  // night, morning, afternoon, evening
  bool dst;
  bool weekend;
  double utc_offset_hours;
};

std::string part_of_day(int local_hour);
CalendarFeatures calendar_features(std::int64_t epoch_hour, const TimeZone& zone);
CalendarFeatures calendar_features(const LocalTime& local);

struct ActivityFlags {
  bool breakfast, lunch, dinner, work, free_time, sleep;
  bool weekday, weekend, holiday;
};

/// Throws std::out_of_range when the calendar does not cover the local date.
ActivityFlags activity_flags(std::int64_t epoch_hour, const TimeZone& zone, const ScheduleTable& schedule,
                             const HolidayCalendar& calendar);
ActivityFlags activity_flags(const LocalTime& local, const ScheduleTable& schedule,
                             const HolidayCalendar& calendar);

struct YesterdayColumns {
  Column median;
  Column ratio;
};

/// For each row t: statistics of the local calendar day before the day of
/// hour t. `local_days` holds the local day of hours -1 .. n (size n + 2),
/// so the first and last day can be recognised as partial.
YesterdayColumns yesterday_stats(const std::vector<double>& series, const std::vector<std::uint8_t>& missing,
                                 const std::vector<std::int64_t>& local_days);

/// 1 iff energy in hour t - 1 exceeds `threshold_kwh`; missing for t = 0
/// or when that hour is missing.
Column kitchen_activity(const std::vector<double>& submeter, const std::vector<std::uint8_t>& missing,
                        double threshold_kwh = 0.01);

struct FeatureOptions {
  int rolling_window = 24;
  double activity_threshold_kwh = 0.01;
  int warmup_hours = 168;
  ScheduleTable schedule = ScheduleTable::defaults();
  std::string holiday_region;  // empty: the frame's region

  void validate() const;
};

/// Design matrix, row-major. One-hot children of a categorical descriptor
/// are named "<parent>=<category>" and inherit its group.
struct FeatureMatrix {
  std::vector<FeatureDescriptor> columns;  // expanded columns
  std::vector<std::string> parents;        // parent descriptor name per column
  std::vector<std::string> households;     // distinct household ids
  std::vector<std::uint32_t> row_household;
  std::vector<std::int64_t> row_hours;     // epoch hour t of each row (target hour is t + 1)
  std::vector<double> values;
  std::vector<double> target;

  std::size_t rows() const { return target.size(); }
  std::size_t cols() const { return columns.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * columns.size() + c]; }
  std::vector<std::string> column_names() const;
  /// Index of a column by name, or -1.
  long column_index(const std::string& name) const;

  /// Columns whose parent descriptor is in `subset`, in matrix order.
  FeatureMatrix select(const std::vector<FeatureDescriptor>& subset) const;
  /// Rows [begin, end).
  FeatureMatrix slice(std::size_t begin, std::size_t end) const;
  /// Row indices of one household, in order.
  std::vector<std::size_t> household_rows(std::size_t household) const;

  /// Throws std::invalid_argument on shape or naming inconsistencies.
  void validate() const;
};

/// Row-wise concatenation; columns must match exactly.
FeatureMatrix concat(const std::vector<FeatureMatrix>& parts);

/// Leakage-safe matrix for one household. Throws std::runtime_error with
/// row-loss diagnostics when no row survives.
FeatureMatrix assemble_matrix(const HourlyFrame& frame, const std::vector<FeatureDescriptor>& descriptors,
                              const FeatureOptions& options = {});

/// Every descriptor column for every hour of the frame, before row dropping.
/// Keys are expanded column names; used for leakage checks and diagnostics.
struct RawColumns {
  std::vector<FeatureDescriptor> columns;
  std::vector<std::string> parents;
  std::vector<Column> data;
};
RawColumns compute_columns(const HourlyFrame& frame, const std::vector<FeatureDescriptor>& descriptors,
                           const FeatureOptions& options = {});

/// CSV with header "household,hour,<columns...>,target" plus a JSON sidecar
/// mapping each column to group, taxonomy path, unit and parent.
void export_matrix(const FeatureMatrix& matrix, const std::string& csv_path, const std::string& json_path);

}  // namespace gridfeat
