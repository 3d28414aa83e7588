// Feed-forward ReLU regressor trained with Adam on standardized data.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gridfeat/models.hpp"

namespace gridfeat {

void MlpParams::validate() const {
  if (hidden_layers.empty()) throw std::invalid_argument("mlp needs at least one hidden layer");
  for (int h : hidden_layers) {
    if (h < 1) throw std::invalid_argument("mlp hidden layer sizes must be >= 1");
  }
  if (max_iterations < 1) throw std::invalid_argument("mlp max_iterations must be >= 1");
  if (!(learning_rate_init > 0)) throw std::invalid_argument("mlp learning_rate_init must be > 0");
  if (batch_size < 1) throw std::invalid_argument("mlp batch_size must be >= 1");
  if (plateau_epochs < 1) throw std::invalid_argument("mlp plateau_epochs must be >= 1");
  if (!(tol >= 0) || !(min_learning_rate > 0) || !(alpha_l2 >= 0)) {
    throw std::invalid_argument("mlp tol, min_learning_rate and alpha_l2 must be non-negative");
  }
}

namespace {

// Column-major batch: one sample per column.
Eigen::MatrixXd forward(const std::vector<MlpLayer>& layers, const Eigen::MatrixXd& x,
                        std::vector<Eigen::MatrixXd>* activations) {
  Eigen::MatrixXd a = x;
  if (activations) activations->assign(1, a);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Eigen::MatrixXd z = (layers[l].weights * a).colwise() + layers[l].bias;
    if (l + 1 < layers.size()) z = z.cwiseMax(0.0);
    a = std::move(z);
    if (activations) activations->push_back(a);
  }
  return a;
}

struct AdamSlot {
  Eigen::MatrixXd mw, vw;
  Eigen::VectorXd mb, vb;
};

}  // namespace

TrainedModel fit_mlp(const FeatureMatrix& train, const MlpParams& params) {
  params.validate();
  require_finite(train);
  const auto n = train.rows(), p = train.cols();
  if (n < 1) throw std::invalid_argument("mlp fit needs at least 1 row");

  MlpModel model;
  model.params = params;
  model.x_mean.assign(p, 0.0);
  model.x_scale.assign(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += train.at(i, j);
    const double mean = s / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) ss += (train.at(i, j) - mean) * (train.at(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    model.x_mean[j] = mean;
    model.x_scale[j] = sd > 0 ? sd : 1.0;
  }
  {
    const double mean = std::accumulate(train.target.begin(), train.target.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double y : train.target) ss += (y - mean) * (y - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    model.y_mean = mean;
    model.y_scale = sd > 0 ? sd : 1.0;
  }

  Eigen::MatrixXd x(p, n);
  Eigen::RowVectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) x(j, i) = (train.at(i, j) - model.x_mean[j]) / model.x_scale[j];
    y(i) = (train.target[i] - model.y_mean) / model.y_scale;
  }

  std::mt19937_64 rng(params.seed);
  std::vector<int> sizes = {static_cast<int>(p)};
  sizes.insert(sizes.end(), params.hidden_layers.begin(), params.hidden_layers.end());
  sizes.push_back(1);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const double limit = std::sqrt(6.0 / (sizes[l] + sizes[l + 1]));
    std::uniform_real_distribution<double> u(-limit, limit);
    MlpLayer layer;
    layer.weights.resize(sizes[l + 1], sizes[l]);
    layer.bias.resize(sizes[l + 1]);
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = u(rng);
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = u(rng);
    model.layers.push_back(std::move(layer));
  }

  std::vector<AdamSlot> adam(model.layers.size());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& w = model.layers[l].weights;
    adam[l] = {Eigen::MatrixXd::Zero(w.rows(), w.cols()), Eigen::MatrixXd::Zero(w.rows(), w.cols()),
               Eigen::VectorXd::Zero(w.rows()), Eigen::VectorXd::Zero(w.rows())};
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  long step = 0;
  double lr = params.learning_rate_init;
  double best_loss = std::numeric_limits<double>::infinity();
  int stale = 0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(params.batch_size);
  std::vector<Eigen::MatrixXd> acts;

  for (int epoch = 0; epoch < params.max_iterations; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const auto m = std::min(batch, n - start);
      Eigen::MatrixXd xb(p, m);
      Eigen::RowVectorXd yb(m);
      for (std::size_t k = 0; k < m; ++k) {
        xb.col(k) = x.col(order[start + k]);
        yb(k) = y(order[start + k]);
      }
      const Eigen::MatrixXd out = forward(model.layers, xb, &acts);
      Eigen::MatrixXd delta = (out - yb) / static_cast<double>(m);
      double penalty = 0.0;
      for (const auto& layer : model.layers) penalty += layer.weights.squaredNorm();
      epoch_loss += (0.5 * (out - yb).squaredNorm() / m + 0.5 * params.alpha_l2 * penalty / m) * m;

      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t l = model.layers.size(); l-- > 0;) {
        auto& layer = model.layers[l];
        const Eigen::MatrixXd gw = delta * acts[l].transpose() + params.alpha_l2 / m * layer.weights;
        const Eigen::VectorXd gb = delta.rowwise().sum();
        if (l > 0) {
          Eigen::MatrixXd back = layer.weights.transpose() * delta;
          delta = back.cwiseProduct((acts[l].array() > 0.0).cast<double>().matrix());
        }
        auto& s = adam[l];
        s.mw = kBeta1 * s.mw + (1 - kBeta1) * gw;
        s.vw = kBeta2 * s.vw + (1 - kBeta2) * gw.cwiseProduct(gw);
        s.mb = kBeta1 * s.mb + (1 - kBeta1) * gb;
        s.vb = kBeta2 * s.vb + (1 - kBeta2) * gb.cwiseProduct(gb);
        layer.weights -= (lr * (s.mw / c1).array() / ((s.vw / c2).array().sqrt() + kEps)).matrix();
        layer.bias -= (lr * (s.mb / c1).array() / ((s.vb / c2).array().sqrt() + kEps)).matrix();
      }
    }
    epoch_loss /= static_cast<double>(n);
    model.loss_curve.push_back(epoch_loss);
    model.iterations = epoch + 1;

    if (epoch_loss > best_loss - params.tol) {
      ++stale;
    } else {
      stale = 0;
    }
    best_loss = std::min(best_loss, epoch_loss);
    if (stale >= params.plateau_epochs) {
      lr /= 2.0;
      stale = 0;
      if (lr < params.min_learning_rate) break;
    }
  }

  TrainedModel out;
  out.kind = ModelKind::Mlp;
  out.feature_names = train.column_names();
  out.impl = std::move(model);
  return out;
}

}  // namespace gridfeat
