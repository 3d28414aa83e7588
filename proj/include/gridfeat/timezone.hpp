#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gridfeat {

/// Broken-down local wall time for one instant.
struct LocalTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
  int weekday = 0;       // 0 = Monday .. 6 = Sunday
  int day_of_year = 0;   // 0-based
  int iso_week = 1;      // ISO-8601 week number
  bool dst = false;
  int utc_offset_seconds = 0;
  std::int64_t local_day = 0;  // days since 1970-01-01 of the local date
};

enum class Ambiguity { Earlier, Later };

/// IANA time zone backed by the system tz database (TZif files).
///
/// The C library keeps a single process-wide zone, so conversions switch it
/// under a global lock. Prefer the bulk `to_local_hours` for whole frames.
class TimeZone {
 public:
  /// Throws std::invalid_argument for names absent from the tz database.
  explicit TimeZone(std::string name);

  const std::string& name() const { return name_; }

  LocalTime to_local(std::int64_t utc_seconds) const;

  /// Local time at the start (plus `offset_seconds`) of each epoch hour
  /// first_hour, first_hour + 1, ...
  std::vector<LocalTime> to_local_hours(std::int64_t first_hour, std::size_t count,
                                        int offset_seconds = 0) const;

  /// UTC seconds of a wall-clock time; nullopt if the wall time does not
  /// exist (spring-forward gap).
  std::optional<std::int64_t> from_local(int year, int month, int day, int hour, int minute,
                                         int second, Ambiguity ambiguity = Ambiguity::Earlier) const;

  static bool exists(const std::string& name);

 private:
  std::string name_;
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);

}  // namespace gridfeat
