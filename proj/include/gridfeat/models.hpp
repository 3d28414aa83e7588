#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gridfeat/featurize.hpp"
#include "json.hpp"

namespace gridfeat {

enum class ModelKind : std::uint8_t { Linear, Gbt, Mlp, SeasonalNaive };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

// --- split -------------------------------------------------------------------

struct SplitSpec {
  double train_fraction = 0.8;
  bool shuffled = false;  // chronological split only

  void validate() const;
};

struct TrainTest {
  FeatureMatrix train;
  FeatureMatrix test;
};

/// Per household: the first floor(f * n) rows train, the rest test, order kept.
/// Households are then concatenated in matrix order.
TrainTest split_train_test(const FeatureMatrix& matrix, const SplitSpec& spec = {});

// --- parameters --------------------------------------------------------------

struct GbtParams {
  int n_rounds = 100;
  double learning_rate = 0.3;
  int max_depth = 6;
  double min_child_weight = 1.0;
  double lambda_l2 = 1.0;

  void validate() const;
  bool operator==(const GbtParams&) const = default;
};

struct MlpParams {
  std::vector<int> hidden_layers = {100};
  int max_iterations = 500;  // epochs
  double learning_rate_init = 1e-3;
  int batch_size = 200;
  int plateau_epochs = 5;  // halve the step size after this many epochs without improvement
  double tol = 1e-4;
  double min_learning_rate = 1e-6;
  double alpha_l2 = 1e-4;
  std::uint64_t seed = 7;

  void validate() const;
  bool operator==(const MlpParams&) const = default;
};

// --- fitted models -------------------------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // go left iff x[feature] < threshold
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;
  double cover = 0.0;  // training rows reaching the node

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(const double* x) const;
  bool operator==(const Tree&) const = default;
};

struct GbtModel {
  GbtParams params;
  double base_score = 0.0;
  std::vector<Tree> trees;
  std::vector<double> train_mse;  // after each round

  bool operator==(const GbtModel&) const = default;
};

struct LinearModel {
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<double> coef;  // on standardized columns
  double intercept = 0.0;

  /// Coefficients and intercept on the original column scale.
  std::vector<double> raw_coefficients() const;
  double raw_intercept() const;
};

struct MlpLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;
};

struct MlpModel {
  MlpParams params;
  std::vector<double> x_mean, x_scale;
  double y_mean = 0.0, y_scale = 1.0;
  std::vector<MlpLayer> layers;
  int iterations = 0;
  std::vector<double> loss_curve;
};

struct SeasonalNaiveModel {
  std::string column = "consumption_lag24";
};

struct TrainedModel {
  ModelKind kind = ModelKind::Linear;
  std::vector<std::string> feature_names;
  std::variant<LinearModel, GbtModel, MlpModel, SeasonalNaiveModel> impl;

  const GbtModel& gbt() const;
};

TrainedModel fit_linear(const FeatureMatrix& train);
TrainedModel fit_gbt(const FeatureMatrix& train, const GbtParams& params = {});
TrainedModel fit_mlp(const FeatureMatrix& train, const MlpParams& params = {});
/// Requires a consumption_lag24 column.
TrainedModel fit_seasonal_naive(const FeatureMatrix& train);

struct ModelParams {
  GbtParams gbt;
  MlpParams mlp;
};
TrainedModel fit(ModelKind kind, const FeatureMatrix& train, const ModelParams& params = {});

/// Throws std::invalid_argument when the matrix column names differ from the
/// fit-time names.
std::vector<double> predict(const TrainedModel& model, const FeatureMatrix& matrix);
double predict_row(const TrainedModel& model, const double* x);

nlohmann::json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& doc);

/// Rejects NaN/inf anywhere in values or target.
void require_finite(const FeatureMatrix& matrix);

}  // namespace gridfeat
