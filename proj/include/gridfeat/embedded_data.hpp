#pragma once

#include <span>
#include <string_view>

namespace gridfeat::embedded {

struct HolidayFile {
  std::string_view region;
  std::string_view content;
};

// Contents of data/taxonomy.json, compiled in.
std::string_view taxonomy_json();

// One entry per data/holidays/<region>.txt, sorted by region.
std::span<const HolidayFile> holiday_files();

}  // namespace gridfeat::embedded
