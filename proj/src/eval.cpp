#include "gridfeat/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridfeat/inventory.hpp"
#include "gridfeat/parallel.hpp"

namespace gridfeat {
namespace {

void check_pair(std::span<const double> a, std::span<const double> f) {
  if (a.size() != f.size()) throw std::invalid_argument("actual and forecast lengths differ");
  if (a.empty()) throw std::invalid_argument("metric over an empty vector");
}

}  // namespace

double mpe(std::span<const double> actual, std::span<const double> forecast, double epsilon) {
  check_pair(actual, forecast);
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double denom = std::max({std::abs(actual[i]), std::abs(forecast[i]), epsilon});
    sum += std::abs(actual[i] - forecast[i]) / denom;
  }
  return sum / static_cast<double>(actual.size()) * 100.0;
}

double mse(std::span<const double> actual, std::span<const double> forecast) {
  check_pair(actual, forecast);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) sum += (actual[i] - forecast[i]) * (actual[i] - forecast[i]);
  return sum / static_cast<double>(actual.size());
}

MetricPair evaluate(std::span<const double> actual, std::span<const double> forecast, double epsilon) {
  MetricPair m;
  m.mse = mse(actual, forecast);
  m.mpe = mpe(actual, forecast, epsilon);
  m.n_samples = actual.size();
  m.epsilon = epsilon;
  return m;
}

std::vector<AblationSpec> ablation_rows(bool has_submeters) {
  using G = FeatureGroup;
  std::vector<AblationSpec> rows = {
      {"raw data", {G::Domain}, true, true},
      {"D", {G::Domain}, true, false},
      {"C", {G::Contextual}, true, false},
      {"B", {G::Behavioral}, true, false},
      {"D+C", {G::Domain, G::Contextual}, true, false},
      {"C+B", {G::Contextual, G::Behavioral}, true, false},
      {"D+B", {G::Domain, G::Behavioral}, true, false},
      {"D+C+B", GroupSet::all(), true, false},
  };
  if (has_submeters) rows.push_back({"D+C+B without submeters", GroupSet::all(), false, false});
  return rows;
}

FeatureMatrix build_dataset_matrix(const std::vector<HourlyFrame>& frames,
                                   const std::vector<FeatureDescriptor>& descriptors, const FeatureOptions& options,
                                   std::size_t jobs) {
  if (frames.empty()) throw std::invalid_argument("no household frames");
  std::vector<FeatureMatrix> parts(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) { parts[i] = assemble_matrix(frames[i], descriptors, options); });
  return concat(parts);
}

GroupSummary explain_groups(const TrainedModel& model, const FeatureMatrix& train, const FeatureMatrix& test,
                            std::size_t max_rows, std::size_t background_rows, std::size_t jobs) {
  const auto samples = subsample_rows(test, max_rows);
  const auto background = subsample_rows(train, background_rows);
  ShapOptions opt;
  opt.jobs = jobs;
  const auto e = tree_shap(model, samples, background, opt);
  GroupSummary s;
  s.contribution = group_contributions(e, samples.columns, samples.parents);
  s.explained_rows = e.rows;
  s.local_accuracy_error = e.local_accuracy_error();
  return s;
}

ReportTable run_ablation(DatasetId dataset, const FeatureMatrix& full, const std::vector<FeatureDescriptor>& descriptors,
                         const AblationConfig& config) {
  config.split.validate();
  const auto jobs = std::max<std::size_t>(1, config.jobs);
  ReportTable table;
  table.dataset = dataset;
  table.models = config.models;

  std::vector<AblationSpec> specs;
  if (config.only_groups) {
    specs.push_back({config.only_groups->to_string(), *config.only_groups, true, false});
  } else {
    specs = ablation_rows(config.has_submeters);
  }

  const auto split = split_train_test(full, config.split);
  struct RowData {
    FeatureMatrix train, test;
    std::string error;
  };
  std::vector<RowData> row_data(specs.size());
  for (std::size_t r = 0; r < specs.size(); ++r) {
    try {
      const auto subset = specs[r].raw_only ? raw_only(descriptors)
                                            : select_features(descriptors, specs[r].combo, specs[r].include_submeter);
      if (subset.empty()) throw std::invalid_argument("row has no raw descriptors");
      row_data[r].train = split.train.select(subset);
      row_data[r].test = split.test.select(subset);
    } catch (const std::exception& e) {
      row_data[r].error = e.what();
    }
  }

  const auto n_models = config.models.size();
  table.rows.resize(specs.size());
  for (std::size_t r = 0; r < specs.size(); ++r) {
    table.rows[r].spec = specs[r];
    table.rows[r].metrics.resize(n_models);
  }
  std::vector<std::optional<TrainedModel>> keep(specs.size());
  const std::size_t cells = specs.size() * n_models;
  parallel_for(cells, jobs, [&](std::size_t cell) {
    const auto r = cell / n_models, k = cell % n_models;
    auto& out = table.rows[r].metrics[k];
    out.epsilon = config.epsilon;
    try {
      const auto kind = config.models[k];
      if (!row_data[r].error.empty()) throw std::invalid_argument(row_data[r].error);
      // the lag-24 baseline ignores the row's feature selection
      const auto& train = kind == ModelKind::SeasonalNaive ? split.train : row_data[r].train;
      const auto& test = kind == ModelKind::SeasonalNaive ? split.test : row_data[r].test;
      auto model = fit(kind, train, config.params);
      const auto forecast = predict(model, test);
      out = evaluate(test.target, forecast, config.epsilon);
      if (kind == ModelKind::Gbt && specs[r].combo == GroupSet::all() && specs[r].include_submeter &&
          !specs[r].raw_only) {
        keep[r] = std::move(model);
      }
    } catch (const std::exception& e) {
      out = MetricPair{};
      out.epsilon = config.epsilon;
      out.failed = true;
      out.error = e.what();
    }
  });

  if (config.explain) {
    for (std::size_t r = 0; r < specs.size(); ++r) {
      if (!keep[r]) continue;
      table.groups = explain_groups(*keep[r], row_data[r].train, row_data[r].test, config.explain_max_rows,
                                    config.explain_background, jobs);
      break;
    }
  }
  return table;
}

ReportTable run_ablation(DatasetId dataset, const std::vector<HourlyFrame>& frames,
                         const std::vector<FeatureDescriptor>& descriptors, const AblationConfig& config) {
  const auto full = build_dataset_matrix(frames, descriptors, config.features, std::max<std::size_t>(1, config.jobs));
  return run_ablation(dataset, full, descriptors, config);
}

}  // namespace gridfeat
