#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridfeat/explain.hpp"
#include "gridfeat/featurize.hpp"
#include "gridfeat/models.hpp"
#include "gridfeat/schema.hpp"

namespace gridfeat {

inline constexpr double kDefaultEpsilon = 1e-6;

/// Mean of |A - F| / max(|A|, |F|, eps), in percent.
double mpe(std::span<const double> actual, std::span<const double> forecast, double epsilon = kDefaultEpsilon);
/// Mean squared error, kWh².
double mse(std::span<const double> actual, std::span<const double> forecast);

struct MetricPair {
  double mse = 0.0;
  double mpe = 0.0;
  std::size_t n_samples = 0;
  double epsilon = kDefaultEpsilon;
  bool failed = false;
  std::string error;

  bool operator==(const MetricPair&) const = default;
};

MetricPair evaluate(std::span<const double> actual, std::span<const double> forecast,
                    double epsilon = kDefaultEpsilon);

struct AblationSpec {
  std::string label;
  GroupSet combo;
  bool include_submeter = true;
  bool raw_only = false;

  bool operator==(const AblationSpec&) const = default;
};

/// Raw-only, D, C, B, D+C, C+B, D+B, D+C+B and, with submeters, D+C+B without them.
std::vector<AblationSpec> ablation_rows(bool has_submeters);

struct AblationRow {
  AblationSpec spec;
  std::vector<MetricPair> metrics;  // one per model, in ReportTable::models order

  bool operator==(const AblationRow&) const = default;
};

struct GroupSummary {
  GroupContribution contribution;
  std::size_t explained_rows = 0;
  double local_accuracy_error = 0.0;
};

struct ReportTable {
  DatasetId dataset = DatasetId::Synthetic;
  std::vector<ModelKind> models;
  std::vector<AblationRow> rows;
  std::optional<GroupSummary> groups;
};

struct AblationConfig {
  std::vector<ModelKind> models = {ModelKind::Linear, ModelKind::Gbt, ModelKind::Mlp, ModelKind::SeasonalNaive};
  ModelParams params;
  SplitSpec split;
  FeatureOptions features;
  double epsilon = kDefaultEpsilon;
  std::size_t jobs = 1;
  bool has_submeters = false;
  std::optional<GroupSet> only_groups;  // restrict the grid to this single combination
  bool explain = true;                  // SHAP group summary for the all-groups gbt cell
  std::size_t explain_max_rows = 2000;  // test rows explained (evenly spaced)
  std::size_t explain_background = 100; // training rows used as the reference sample
};

/// Per-household matrices with every descriptor; rows are shared by all grid rows.
FeatureMatrix build_dataset_matrix(const std::vector<HourlyFrame>& frames,
                                   const std::vector<FeatureDescriptor>& descriptors, const FeatureOptions& options,
                                   std::size_t jobs);

/// Runs the grid. A failing cell is marked failed and the grid continues.
ReportTable run_ablation(DatasetId dataset, const std::vector<HourlyFrame>& frames,
                         const std::vector<FeatureDescriptor>& descriptors, const AblationConfig& config);

/// Same, on an already assembled matrix.
ReportTable run_ablation(DatasetId dataset, const FeatureMatrix& full, const std::vector<FeatureDescriptor>& descriptors,
                         const AblationConfig& config);

/// Explanation of a gbt model on the test split, with the training split as reference sample.
GroupSummary explain_groups(const TrainedModel& model, const FeatureMatrix& train, const FeatureMatrix& test,
                            std::size_t max_rows, std::size_t background_rows, std::size_t jobs);

// --- report emitters (report.cpp) ----------------------------------------------

enum class ReportFormat { Markdown, Csv };

std::string render_report(const ReportTable& table, ReportFormat format);
/// Inverse of the CSV rendering.
ReportTable parse_report_csv(const std::string& text);
/// Feature counts per group and, when available, SHAP shares.
nlohmann::json groups_json(const ReportTable& table, const std::vector<FeatureDescriptor>& descriptors);

}  // namespace gridfeat
