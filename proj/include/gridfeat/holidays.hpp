#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gridfeat {

/// Static public-holiday list for one region, keyed by local day number
/// (days since 1970-01-01).
class HolidayCalendar {
 public:
  /// Shipped calendars: "ca-bc", "fr", "gb-eng". Throws std::invalid_argument otherwise.
  static const HolidayCalendar& for_region(std::string_view region);
  static std::vector<std::string> regions();

  /// Parses "YYYY-MM-DD name" lines; '#' starts a comment. The calendar
  /// covers every whole year that appears in the list.
  static HolidayCalendar parse(std::string region, std::string_view text);

  const std::string& region() const { return region_; }
  bool is_holiday(std::int64_t local_day) const { return days_.count(local_day) > 0; }
  bool covers(std::int64_t local_day) const {
    return local_day >= first_day_ && local_day <= last_day_;
  }
  /// Throws std::out_of_range when [first, last] is not fully covered.
  void require_coverage(std::int64_t first, std::int64_t last) const;

  std::size_t size() const { return days_.size(); }

 private:
  std::string region_;
  std::set<std::int64_t> days_;
  std::int64_t first_day_ = 0;
  std::int64_t last_day_ = -1;
};

}  // namespace gridfeat
