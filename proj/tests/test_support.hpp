#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "gridfeat/featurize.hpp"

namespace gridfeat::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gridfeat-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

/// Dense numeric matrix with columns x0..x{p-1}, all in the Domain group.
inline FeatureMatrix numeric_matrix(std::size_t rows, std::size_t cols) {
  FeatureMatrix m;
  for (std::size_t j = 0; j < cols; ++j) {
    FeatureDescriptor d;
    d.name = "x" + std::to_string(j);
    d.group = FeatureGroup::Domain;
    d.taxonomy_path = "domain/household/energy";
    d.unit = "kWh";
    d.recipe = "target:lag:" + std::to_string(j + 1);
    m.columns.push_back(d);
    m.parents.push_back(d.name);
  }
  m.households = {"h"};
  m.row_household.assign(rows, 0);
  m.row_hours.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) m.row_hours[i] = static_cast<std::int64_t>(i);
  m.values.assign(rows * cols, 0.0);
  m.target.assign(rows, 0.0);
  return m;
}

inline FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int levels = 0) {
  auto m = numeric_matrix(rows, cols);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> d(0, std::max(levels - 1, 0));
  for (auto& v : m.values) v = levels > 0 ? d(rng) : u(rng);
  for (std::size_t i = 0; i < rows; ++i) {
    double y = 0.0;
    for (std::size_t j = 0; j < cols; ++j) y += (j % 2 ? -1.0 : 1.0) * (j + 1) * m.values[i * cols + j];
    m.target[i] = y + 0.1 * u(rng);
  }
  return m;
}

}  // namespace gridfeat::test
