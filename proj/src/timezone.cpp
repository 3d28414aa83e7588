#include "gridfeat/timezone.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <stdexcept>

namespace gridfeat {
namespace {

std::mutex& tz_mutex() {
  static std::mutex m;
  return m;
}

std::string zoneinfo_dir() {
  if (const char* dir = std::getenv("TZDIR"); dir && *dir) return dir;
  return "/usr/share/zoneinfo";
}

// Switches the process zone for the lifetime of the guard. Callers hold tz_mutex().
class ZoneSwitch {
 public:
  explicit ZoneSwitch(const std::string& name) {
    if (const char* prev = std::getenv("TZ")) {
      previous_ = prev;
      had_previous_ = true;
    }
    ::setenv("TZ", name.c_str(), 1);
    ::tzset();
  }
  ~ZoneSwitch() {
    if (had_previous_) {
      ::setenv("TZ", previous_.c_str(), 1);
    } else {
      ::unsetenv("TZ");
    }
    ::tzset();
  }
  ZoneSwitch(const ZoneSwitch&) = delete;
  ZoneSwitch& operator=(const ZoneSwitch&) = delete;

 private:
  std::string previous_;
  bool had_previous_ = false;
};

LocalTime from_tm(const std::tm& t) {
  LocalTime lt;
  lt.year = t.tm_year + 1900;
  lt.month = t.tm_mon + 1;
  lt.day = t.tm_mday;
  lt.hour = t.tm_hour;
  lt.minute = t.tm_min;
  lt.second = t.tm_sec;
  lt.weekday = (t.tm_wday + 6) % 7;
  lt.day_of_year = t.tm_yday;
  lt.dst = t.tm_isdst > 0;
  lt.utc_offset_seconds = static_cast<int>(t.tm_gmtoff);
  lt.local_day = days_from_civil(lt.year, lt.month, lt.day);
  char buf[8];
  std::strftime(buf, sizeof(buf), "%V", &t);
  lt.iso_week = std::atoi(buf);
  return lt;
}

LocalTime convert_locked(std::int64_t utc_seconds) {
  std::time_t tt = static_cast<std::time_t>(utc_seconds);
  std::tm t{};
  if (!::localtime_r(&tt, &t)) throw std::runtime_error("localtime_r failed");
  return from_tm(t);
}

}  // namespace

std::int64_t days_from_civil(int year, int month, int day) {
  using namespace std::chrono;
  sys_days d = std::chrono::year{year} / std::chrono::month{static_cast<unsigned>(month)} /
               std::chrono::day{static_cast<unsigned>(day)};
  return d.time_since_epoch().count();
}

bool TimeZone::exists(const std::string& name) {
  if (name.empty() || name.find("..") != std::string::npos || name.front() == '/') return false;
  std::error_code ec;
  return std::filesystem::is_regular_file(std::filesystem::path(zoneinfo_dir()) / name, ec);
}

TimeZone::TimeZone(std::string name) : name_(std::move(name)) {
  if (!exists(name_)) throw std::invalid_argument("unknown IANA time zone '" + name_ + "'");
}

LocalTime TimeZone::to_local(std::int64_t utc_seconds) const {
  std::lock_guard lock(tz_mutex());
  ZoneSwitch zone(name_);
  return convert_locked(utc_seconds);
}

std::vector<LocalTime> TimeZone::to_local_hours(std::int64_t first_hour, std::size_t count,
                                                int offset_seconds) const {
  std::vector<LocalTime> out;
  out.reserve(count);
  std::lock_guard lock(tz_mutex());
  ZoneSwitch zone(name_);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(convert_locked((first_hour + static_cast<std::int64_t>(i)) * 3600 + offset_seconds));
  }
  return out;
}

std::optional<std::int64_t> TimeZone::from_local(int year, int month, int day, int hour,
                                                 int minute, int second,
                                                 Ambiguity ambiguity) const {
  std::lock_guard lock(tz_mutex());
  ZoneSwitch zone(name_);
  std::optional<std::int64_t> best;
  for (int isdst : {1, 0}) {
    std::tm t{};
    t.tm_year = year - 1900;
    t.tm_mon = month - 1;
    t.tm_mday = day;
    t.tm_hour = hour;
    t.tm_min = minute;
    t.tm_sec = second;
    t.tm_isdst = isdst;
    std::time_t tt = ::mktime(&t);
    if (tt == static_cast<std::time_t>(-1)) continue;
    auto back = convert_locked(tt);
    if (back.year != year || back.month != month || back.day != day || back.hour != hour ||
        back.minute != minute || back.second != second) {
      continue;
    }
    std::int64_t candidate = tt;
    if (!best) {
      best = candidate;
    } else if (ambiguity == Ambiguity::Earlier ? candidate < *best : candidate > *best) {
      best = candidate;
    }
  }
  return best;
}

}  // namespace gridfeat
