#include <cmath>
#include <stdexcept>

#include "gridfeat/models.hpp"

namespace gridfeat {

std::vector<double> LinearModel::raw_coefficients() const {
  std::vector<double> out(coef.size());
  for (std::size_t j = 0; j < coef.size(); ++j) out[j] = coef[j] / scale[j];
  return out;
}

double LinearModel::raw_intercept() const {
  double b = intercept;
  for (std::size_t j = 0; j < coef.size(); ++j) b -= coef[j] * mean[j] / scale[j];
  return b;
}

TrainedModel fit_linear(const FeatureMatrix& train) {
  require_finite(train);
  const auto n = train.rows(), p = train.cols();
  if (n < p + 1) {
    throw std::invalid_argument("linear fit needs at least " + std::to_string(p + 1) + " rows, got " +
                                std::to_string(n));
  }
  LinearModel m;
  m.mean.assign(p, 0.0);
  m.scale.assign(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += train.at(i, j);
    m.mean[j] = s / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (train.at(i, j) - m.mean[j]) * (train.at(i, j) - m.mean[j]);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    m.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  double ybar = 0.0;
  for (double y : train.target) ybar += y;
  ybar /= static_cast<double>(n);

  Eigen::MatrixXd z(n, p);
  Eigen::VectorXd yc(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) z(i, j) = (train.at(i, j) - m.mean[j]) / m.scale[j];
    yc(i) = train.target[i] - ybar;
  }
  Eigen::MatrixXd gram = z.transpose() * z;
  gram.diagonal().array() += 1e-8;
  Eigen::VectorXd beta = gram.ldlt().solve(z.transpose() * yc);
  m.coef.assign(beta.data(), beta.data() + p);
  m.intercept = ybar;

  TrainedModel out;
  out.kind = ModelKind::Linear;
  out.feature_names = train.column_names();
  out.impl = std::move(m);
  return out;
}

}  // namespace gridfeat
