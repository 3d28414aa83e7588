#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridfeat/featurize.hpp"
#include "gridfeat/models.hpp"
#include "json.hpp"

namespace gridfeat {

struct ShapExplanation {
  double base_value = 0.0;
  std::vector<std::string> feature_names;
  std::size_t rows = 0;
  std::vector<double> phi;          // rows x features, row-major
  std::vector<double> predictions;  // model output per row

  std::size_t cols() const { return feature_names.size(); }
  double at(std::size_t r, std::size_t j) const { return phi[r * cols() + j]; }
  /// max over rows of |base + sum(phi) - prediction|
  double local_accuracy_error() const;
};

enum class ShapMode {
  Interventional,  // expectation over a background sample
  PathDependent,   // expectation weighted by training cover along each tree
};

struct ShapOptions {
  ShapMode mode = ShapMode::Interventional;
  std::size_t jobs = 1;
};

/// Exact Shapley values of a gbt model. Interventional mode averages the
/// per-reference attributions over every `background` row; path-dependent
/// mode ignores `background`. Throws std::invalid_argument for non-tree
/// models (use brute_force_shap instead).
ShapExplanation tree_shap(const TrainedModel& model, const FeatureMatrix& samples, const FeatureMatrix& background,
                          const ShapOptions& options = {});

/// Single-tree attributions for one sample against one reference row.
std::vector<double> tree_shap_single(const Tree& tree, const double* x, const double* reference,
                                     std::size_t features);

/// Shapley values from the subset definition with an interventional value
/// function over `background`. Works for any model; refuses more than 12 features.
std::vector<double> brute_force_shap(const TrainedModel& model, const double* x, const FeatureMatrix& background);

/// Evenly spaced rows, at most `max_rows` (all rows when max_rows == 0).
FeatureMatrix subsample_rows(const FeatureMatrix& matrix, std::size_t max_rows);

struct GroupContribution {
  std::array<std::size_t, 3> feature_counts{};  // parent descriptors per group
  std::array<double, 3> importance{};           // sum of mean |phi|
  std::array<double, 3> share_percent{};

  double share(FeatureGroup g) const { return share_percent[static_cast<int>(g)]; }
};

/// Mean |phi| per column, summed per group of the column descriptor and
/// normalised to 100 %. `parents` maps one-hot columns back to their
/// descriptor for the feature counts (empty: each column counts once).
GroupContribution group_contributions(const ShapExplanation& explanation, const std::vector<FeatureDescriptor>& columns,
                                      const std::vector<std::string>& parents = {});

/// Mean |phi| per column.
std::vector<double> mean_abs_phi(const ShapExplanation& explanation);

/// "feature,parent,group,taxonomy_path,mean_abs_phi"
std::string explanation_csv(const ShapExplanation& explanation, const FeatureMatrix& matrix);
nlohmann::json group_summary_json(const GroupContribution& contribution);

}  // namespace gridfeat
