#include "gridfeat/holidays.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "gridfeat/csv.hpp"
#include "gridfeat/embedded_data.hpp"
#include "gridfeat/timezone.hpp"

namespace gridfeat {

HolidayCalendar HolidayCalendar::parse(std::string region, std::string_view text) {
  HolidayCalendar cal;
  cal.region_ = std::move(region);
  int min_year = 0;
  int max_year = -1;
  csv::for_each_line(text, [&](std::string_view line) {
    line = csv::trim(line);
    if (line.empty() || line.front() == '#') return;
    if (line.size() < 10 || line[4] != '-' || line[7] != '-') {
      throw std::invalid_argument("bad holiday line: " + std::string(line));
    }
    auto y = csv::parse_int(line.substr(0, 4));
    auto m = csv::parse_int(line.substr(5, 2));
    auto d = csv::parse_int(line.substr(8, 2));
    if (!y || !m || !d) throw std::invalid_argument("bad holiday date: " + std::string(line));
    int year = static_cast<int>(*y);
    cal.days_.insert(days_from_civil(year, static_cast<int>(*m), static_cast<int>(*d)));
    if (max_year < min_year) {
      min_year = max_year = year;
    } else {
      min_year = std::min(min_year, year);
      max_year = std::max(max_year, year);
    }
  });
  if (max_year >= min_year) {
    cal.first_day_ = days_from_civil(min_year, 1, 1);
    cal.last_day_ = days_from_civil(max_year, 12, 31);
  }
  return cal;
}

const HolidayCalendar& HolidayCalendar::for_region(std::string_view region) {
  static const std::map<std::string, HolidayCalendar, std::less<>> calendars = [] {
    std::map<std::string, HolidayCalendar, std::less<>> m;
    for (const auto& f : embedded::holiday_files()) {
      m.emplace(std::string(f.region), parse(std::string(f.region), f.content));
    }
    return m;
  }();
  auto it = calendars.find(region);
  if (it == calendars.end()) {
    throw std::invalid_argument("no holiday calendar for region '" + std::string(region) + "'");
  }
  return it->second;
}

std::vector<std::string> HolidayCalendar::regions() {
  std::vector<std::string> out;
  for (const auto& f : embedded::holiday_files()) out.emplace_back(f.region);
  return out;
}

void HolidayCalendar::require_coverage(std::int64_t first, std::int64_t last) const {
  if (first > last) return;
  if (!covers(first) || !covers(last)) {
    throw std::out_of_range("holiday calendar '" + region_ + "' does not cover the frame's date span");
  }
}

}  // namespace gridfeat
