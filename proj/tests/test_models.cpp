#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <random>

#include "gridfeat/eval.hpp"
#include "gridfeat/models.hpp"
#include "test_support.hpp"

using namespace gridfeat;

namespace {

double train_mse(const TrainedModel& model, const FeatureMatrix& m) {
  const auto p = predict(model, m);
  return mse(m.target, p);
}

FeatureMatrix step_data() {
  auto m = test::numeric_matrix(200, 1);
  for (std::size_t i = 0; i < 200; ++i) {
    m.values[i] = static_cast<double>(i) / 199.0;
    m.target[i] = m.values[i] > 0.5 ? 1.0 : 0.0;
  }
  return m;
}

}  // namespace

// --- split -----------------------------------------------------------------------

TEST(Split, EightyTwenty) {
  auto m = test::numeric_matrix(100, 1);
  const auto s = split_train_test(m);
  EXPECT_EQ(s.train.rows(), 80u);
  EXPECT_EQ(s.test.rows(), 20u);
}

TEST(Split, FloorRule) {
  const auto s = split_train_test(test::numeric_matrix(5, 1));
  EXPECT_EQ(s.train.rows(), 4u);
  EXPECT_EQ(s.test.rows(), 1u);
}

TEST(Split, ConcatenationRestoresOrder) {
  std::mt19937_64 rng(1);
  const auto m = test::random_matrix(37, 3, rng);
  const auto s = split_train_test(m);
  EXPECT_EQ(concat({s.train, s.test}).values, m.values);
  EXPECT_EQ(concat({s.train, s.test}).row_hours, m.row_hours);
}

TEST(Split, PerHousehold) {
  auto a = test::numeric_matrix(10, 1), b = test::numeric_matrix(20, 1);
  b.households = {"g"};
  for (std::size_t i = 0; i < 20; ++i) b.row_hours[i] = 1000 + static_cast<std::int64_t>(i);
  const auto s = split_train_test(concat({a, b}));
  EXPECT_EQ(s.train.rows(), 8u + 16u);
  EXPECT_EQ(s.test.rows(), 2u + 4u);
  EXPECT_EQ(s.test.row_hours, (std::vector<std::int64_t>{8, 9, 1016, 1017, 1018, 1019}));
}

TEST(Split, ShuffleRejected) {
  SplitSpec spec;
  spec.shuffled = true;
  EXPECT_THROW(split_train_test(test::numeric_matrix(10, 1), spec), std::invalid_argument);
  spec.shuffled = false;
  spec.train_fraction = 1.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

// --- linear ----------------------------------------------------------------------

TEST(Linear, RecoversLine) {
  auto m = test::numeric_matrix(50, 1);
  for (std::size_t i = 0; i < 50; ++i) {
    m.values[i] = static_cast<double>(i) * 0.1;
    m.target[i] = 2.0 * m.values[i] + 1.0;
  }
  const auto model = fit_linear(m);
  EXPECT_LT(train_mse(model, m), 1e-18);
  const auto& lin = std::get<LinearModel>(model.impl);
  EXPECT_NEAR(lin.raw_coefficients()[0], 2.0, 1e-9);
  EXPECT_NEAR(lin.raw_intercept(), 1.0, 1e-9);
}

TEST(Linear, DuplicatedColumnIsHarmless) {
  std::mt19937_64 rng(4);
  auto one = test::random_matrix(80, 1, rng);
  auto two = test::numeric_matrix(80, 2);
  for (std::size_t i = 0; i < 80; ++i) {
    two.values[2 * i] = two.values[2 * i + 1] = one.values[i];
    two.target[i] = one.target[i];
  }
  const auto p1 = predict(fit_linear(one), one);
  const auto p2 = predict(fit_linear(two), two);
  for (std::size_t i = 0; i < 80; ++i) EXPECT_NEAR(p1[i], p2[i], 1e-6);
}

TEST(Linear, InterceptOnlyNoise) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(3.0, 1.0);
  auto m = test::numeric_matrix(500, 1);
  for (auto& y : m.target) y = n(rng);
  // constant column carries no information
  for (auto& v : m.values) v = 1.0;
  const double mean = std::accumulate(m.target.begin(), m.target.end(), 0.0) / 500.0;
  const auto model = fit_linear(m);
  for (double p : predict(model, m)) EXPECT_NEAR(p, mean, 1e-9);
}

TEST(Linear, MatchesNormalEquations) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = test::random_matrix(200, 5, rng);
    Eigen::MatrixXd X(200, 6);
    Eigen::VectorXd y(200);
    for (std::size_t i = 0; i < 200; ++i) {
      X(i, 0) = 1.0;
      for (std::size_t j = 0; j < 5; ++j) X(i, j + 1) = m.at(i, j);
      y(i) = m.target[i];
    }
    const Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    const auto model = fit_linear(m);
    const auto& lin = std::get<LinearModel>(model.impl);
    const auto raw = lin.raw_coefficients();
    EXPECT_NEAR(lin.raw_intercept(), beta(0), 1e-8);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(raw[j], beta(j + 1), 1e-8);
  }
}

TEST(Linear, NonFiniteRejected) {
  auto m = test::numeric_matrix(10, 1);
  m.values[3] = std::nan("");
  EXPECT_THROW(fit_linear(m), std::invalid_argument);
}

// --- gbt -------------------------------------------------------------------------

TEST(Gbt, NullTreePredictsMean) {
  std::mt19937_64 rng(2);
  const auto m = test::random_matrix(60, 3, rng);
  GbtParams p;
  p.n_rounds = 1;
  p.max_depth = 0;
  const double mean = std::accumulate(m.target.begin(), m.target.end(), 0.0) / 60.0;
  for (double v : predict(fit_gbt(m, p), m)) EXPECT_NEAR(v, mean, 1e-12);
}

TEST(Gbt, FitsStepFunction) {
  const auto m = step_data();
  GbtParams p;
  p.max_depth = 1;
  p.n_rounds = 50;
  const auto model = fit_gbt(m, p);
  EXPECT_LT(train_mse(model, m), 1e-3);
  // the first split lands between the two plateaus
  const auto& root = model.gbt().trees[0].nodes[0];
  EXPECT_EQ(root.feature, 0);
  EXPECT_GT(root.threshold, 99.0 / 199.0);
  EXPECT_LT(root.threshold, 100.0 / 199.0);
}

TEST(Gbt, RefitIsBitIdentical) {
  std::mt19937_64 rng(5);
  const auto m = test::random_matrix(300, 6, rng, 5);
  EXPECT_EQ(fit_gbt(m).gbt(), fit_gbt(m).gbt());
}

TEST(Gbt, TrainLossNonIncreasing) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = test::random_matrix(150, 4, rng, trial % 2 ? 4 : 0);
    const auto model = fit_gbt(m);
    const auto& loss = model.gbt().train_mse;
    for (std::size_t k = 1; k < loss.size(); ++k) EXPECT_LE(loss[k], loss[k - 1] + 1e-12);
  }
}

TEST(Gbt, TiesPreferLowestFeature) {
  auto m = test::numeric_matrix(40, 2);
  for (std::size_t i = 0; i < 40; ++i) {
    m.values[2 * i] = m.values[2 * i + 1] = i < 20 ? 0.0 : 1.0;
    m.target[i] = i < 20 ? 0.0 : 1.0;
  }
  GbtParams p;
  p.n_rounds = 1;
  p.max_depth = 1;
  const auto model = fit_gbt(m, p);
  const auto& root = model.gbt().trees[0].nodes[0];
  EXPECT_EQ(root.feature, 0);
  EXPECT_DOUBLE_EQ(root.threshold, 0.5);
}

TEST(Gbt, CoverCountsRows) {
  std::mt19937_64 rng(7);
  const auto m = test::random_matrix(100, 3, rng);
  const auto model = fit_gbt(m);
  for (const auto& tree : model.gbt().trees) {
    EXPECT_EQ(tree.nodes[0].cover, 100.0);
    for (const auto& n : tree.nodes) {
      if (!n.is_leaf()) EXPECT_EQ(n.cover, tree.nodes[n.left].cover + tree.nodes[n.right].cover);
    }
  }
}

TEST(Gbt, InvalidParams) {
  GbtParams p;
  p.learning_rate = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(fit_gbt(test::numeric_matrix(1, 1)), std::invalid_argument);
}

// --- mlp -------------------------------------------------------------------------

TEST(Mlp, ConstantTarget) {
  std::mt19937_64 rng(1);
  auto m = test::random_matrix(300, 2, rng);
  for (auto& y : m.target) y = 1.7;
  for (double p : predict(fit_mlp(m), m)) EXPECT_NEAR(p, 1.7, 1e-3);
}

TEST(Mlp, LearnsIdentity) {
  auto m = test::numeric_matrix(2000, 1);
  for (std::size_t i = 0; i < 2000; ++i) m.values[i] = m.target[i] = static_cast<double>(i) / 1999.0;
  const auto model = fit_mlp(m);
  EXPECT_LT(train_mse(model, m), 1e-2);
  EXPECT_LE(std::get<MlpModel>(model.impl).iterations, 500);
}

TEST(Mlp, IterationCapAndDeterminism) {
  std::mt19937_64 rng(2);
  const auto m = test::random_matrix(400, 3, rng);
  MlpParams p;
  p.max_iterations = 30;
  const auto a = fit_mlp(m, p), b = fit_mlp(m, p);
  EXPECT_LE(std::get<MlpModel>(a.impl).iterations, 30);
  EXPECT_EQ(predict(a, m), predict(b, m));
  p.seed = 8;
  EXPECT_NE(predict(a, m), predict(fit_mlp(m, p), m));
}

TEST(Mlp, DefaultsMatchProtocol) {
  const MlpParams p;
  EXPECT_EQ(p.max_iterations, 500);
  EXPECT_EQ(p.hidden_layers, std::vector<int>{100});
  EXPECT_EQ(p.batch_size, 200);
  EXPECT_EQ(p.plateau_epochs, 5);
}

// --- seasonal naive and predict contract -----------------------------------------

TEST(SeasonalNaive, ReturnsLag24Column) {
  std::mt19937_64 rng(3);
  auto m = test::random_matrix(50, 2, rng);
  m.columns[1].name = m.parents[1] = "consumption_lag24";
  const auto model = fit_seasonal_naive(m);
  const auto p = predict(model, m);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(p[i], m.at(i, 1));
  EXPECT_THROW(fit_seasonal_naive(test::numeric_matrix(5, 1)), std::invalid_argument);
}

TEST(Predict, ColumnMismatchRejected) {
  std::mt19937_64 rng(3);
  const auto m = test::random_matrix(50, 2, rng);
  auto other = m;
  other.columns[0].name = "renamed";
  EXPECT_THROW(predict(fit_linear(m), other), std::invalid_argument);
}

TEST(Predict, DepthZeroGbtIsConstant) {
  std::mt19937_64 rng(3);
  const auto m = test::random_matrix(50, 2, rng);
  GbtParams p;
  p.max_depth = 0;
  p.n_rounds = 1;
  const auto out = predict(fit_gbt(m, p), m);
  for (double v : out) EXPECT_EQ(v, out[0]);
}

TEST(Serialize, RoundTripAllKinds) {
  std::mt19937_64 rng(10);
  auto m = test::random_matrix(120, 3, rng);
  m.columns[2].name = m.parents[2] = "consumption_lag24";
  MlpParams mp;
  mp.max_iterations = 20;
  ModelParams params{GbtParams{}, mp};
  for (auto kind : {ModelKind::Linear, ModelKind::Gbt, ModelKind::Mlp, ModelKind::SeasonalNaive}) {
    const auto model = fit(kind, m, params);
    const auto doc = to_json(model);
    const auto back = model_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(back.kind, kind);
    EXPECT_EQ(predict(back, m), predict(model, m)) << to_string(kind);
  }
}

TEST(Serialize, GbtTreesAreNested) {
  const auto doc = to_json(fit_gbt(step_data()));
  EXPECT_EQ(doc.at("kind"), "gbt");
  const auto& root = doc.at("trees").at(0);
  EXPECT_TRUE(root.contains("feature"));
  EXPECT_TRUE(root.contains("threshold"));
  EXPECT_TRUE(root.at("left").contains("leaf_value") || root.at("left").contains("feature"));
}

TEST(ModelKindNames, ParseAndPrint) {
  for (auto kind : {ModelKind::Linear, ModelKind::Gbt, ModelKind::Mlp, ModelKind::SeasonalNaive}) {
    EXPECT_EQ(parse_model_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_model_kind("prophet"), std::invalid_argument);
}
