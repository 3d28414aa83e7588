#include "gridfeat/models.hpp"

#include <cmath>
#include <stdexcept>

namespace gridfeat {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Gbt: return "gbt";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::SeasonalNaive: return "seasonal_naive";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  for (auto k : {ModelKind::Linear, ModelKind::Gbt, ModelKind::Mlp, ModelKind::SeasonalNaive}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown model kind '" + std::string(text) +
                              "' (expected linear, gbt, mlp or seasonal_naive)");
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0 && train_fraction < 1)) throw std::invalid_argument("train fraction must lie in (0, 1)");
  if (shuffled) throw std::invalid_argument("shuffled splits are not supported; the split is chronological");
}

TrainTest split_train_test(const FeatureMatrix& matrix, const SplitSpec& spec) {
  spec.validate();
  std::vector<FeatureMatrix> train, test;
  for (std::size_t h = 0; h < matrix.households.size(); ++h) {
    const auto rows = matrix.household_rows(h);
    if (rows.empty()) continue;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (rows[k] != rows[k - 1] + 1 || matrix.row_hours[rows[k]] <= matrix.row_hours[rows[k - 1]]) {
        throw std::invalid_argument("household rows must be contiguous and chronological");
      }
    }
    const auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(rows.size())));
    train.push_back(matrix.slice(rows.front(), rows.front() + n_train));
    test.push_back(matrix.slice(rows.front() + n_train, rows.back() + 1));
  }
  TrainTest out{concat(train), concat(test)};
  if (train.empty()) out.train = out.test = matrix.slice(0, 0);
  return out;
}

void require_finite(const FeatureMatrix& m) {
  for (double v : m.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("matrix contains non-finite values");
  }
  for (double v : m.target) {
    if (!std::isfinite(v)) throw std::invalid_argument("target contains non-finite values");
  }
}

const GbtModel& TrainedModel::gbt() const {
  if (kind != ModelKind::Gbt) throw std::invalid_argument("model is not a gbt model");
  return std::get<GbtModel>(impl);
}

TrainedModel fit_seasonal_naive(const FeatureMatrix& train) {
  SeasonalNaiveModel m;
  if (train.column_index(m.column) < 0) {
    throw std::invalid_argument("seasonal-naive baseline needs a '" + m.column + "' column");
  }
  TrainedModel out;
  out.kind = ModelKind::SeasonalNaive;
  out.feature_names = train.column_names();
  out.impl = m;
  return out;
}

TrainedModel fit(ModelKind kind, const FeatureMatrix& train, const ModelParams& params) {
  switch (kind) {
    case ModelKind::Linear: return fit_linear(train);
    case ModelKind::Gbt: return fit_gbt(train, params.gbt);
    case ModelKind::Mlp: return fit_mlp(train, params.mlp);
    case ModelKind::SeasonalNaive: return fit_seasonal_naive(train);
  }
  throw std::invalid_argument("unknown model kind");
}

double predict_row(const TrainedModel& model, const double* x) {
  const auto p = model.feature_names.size();
  switch (model.kind) {
    case ModelKind::Linear: {
      const auto& m = std::get<LinearModel>(model.impl);
      double y = m.intercept;
      for (std::size_t j = 0; j < p; ++j) y += m.coef[j] * (x[j] - m.mean[j]) / m.scale[j];
      return y;
    }
    case ModelKind::Gbt: {
      const auto& m = std::get<GbtModel>(model.impl);
      double y = m.base_score;
      for (const auto& t : m.trees) y += t.predict(x);
      return y;
    }
    case ModelKind::Mlp: {
      const auto& m = std::get<MlpModel>(model.impl);
      Eigen::VectorXd a(p);
      for (std::size_t j = 0; j < p; ++j) a(j) = (x[j] - m.x_mean[j]) / m.x_scale[j];
      for (std::size_t l = 0; l < m.layers.size(); ++l) {
        Eigen::VectorXd z = m.layers[l].weights * a + m.layers[l].bias;
        if (l + 1 < m.layers.size()) z = z.cwiseMax(0.0);
        a = std::move(z);
      }
      return a(0) * m.y_scale + m.y_mean;
    }
    case ModelKind::SeasonalNaive: {
      const auto& m = std::get<SeasonalNaiveModel>(model.impl);
      for (std::size_t j = 0; j < p; ++j) {
        if (model.feature_names[j] == m.column) return x[j];
      }
      throw std::invalid_argument("seasonal-naive column missing");
    }
  }
  return 0.0;
}

std::vector<double> predict(const TrainedModel& model, const FeatureMatrix& matrix) {
  const auto names = matrix.column_names();
  if (names != model.feature_names) {
    std::string detail;
    for (std::size_t j = 0; j < std::max(names.size(), model.feature_names.size()); ++j) {
      const std::string a = j < model.feature_names.size() ? model.feature_names[j] : "<none>";
      const std::string b = j < names.size() ? names[j] : "<none>";
      if (a != b) {
        detail = "column " + std::to_string(j) + " is '" + b + "', model expects '" + a + "'";
        break;
      }
    }
    throw std::invalid_argument("matrix columns do not match the fitted model: " + detail);
  }
  std::vector<double> out(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out[r] = predict_row(model, matrix.values.data() + r * matrix.cols());
    if (!std::isfinite(out[r])) throw std::runtime_error("model produced a non-finite prediction");
  }
  return out;
}

// --- JSON ----------------------------------------------------------------------

namespace {

using nlohmann::json;

json node_json(const Tree& t, int k) {
  const auto& nd = t.nodes[k];
  if (nd.is_leaf()) return {{"leaf_value", nd.leaf_value}, {"cover", nd.cover}};
  return {{"feature", nd.feature},
          {"threshold", nd.threshold},
          {"cover", nd.cover},
          {"left", node_json(t, nd.left)},
          {"right", node_json(t, nd.right)}};
}

int node_from_json(const json& doc, Tree& t) {
  const int k = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  t.nodes[k].cover = doc.at("cover").get<double>();
  if (doc.contains("leaf_value")) {
    t.nodes[k].leaf_value = doc.at("leaf_value").get<double>();
    return k;
  }
  t.nodes[k].feature = doc.at("feature").get<int>();
  t.nodes[k].threshold = doc.at("threshold").get<double>();
  const int left = node_from_json(doc.at("left"), t);
  const int right = node_from_json(doc.at("right"), t);
  t.nodes[k].left = left;
  t.nodes[k].right = right;
  return k;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& doc) {
  const auto rows = static_cast<Eigen::Index>(doc.size());
  const auto cols = rows ? static_cast<Eigen::Index>(doc[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(doc[r].size()) != cols) throw std::invalid_argument("ragged weight matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = doc[r][c].get<double>();
  }
  return m;
}

}  // namespace

json to_json(const TrainedModel& model) {
  json doc = {{"kind", std::string(to_string(model.kind))}, {"feature_names", model.feature_names}};
  switch (model.kind) {
    case ModelKind::Linear: {
      const auto& m = std::get<LinearModel>(model.impl);
      doc["params"] = json::object();
      doc["mean"] = m.mean;
      doc["scale"] = m.scale;
      doc["coef"] = m.coef;
      doc["intercept"] = m.intercept;
      break;
    }
    case ModelKind::Gbt: {
      const auto& m = std::get<GbtModel>(model.impl);
      doc["params"] = {{"n_rounds", m.params.n_rounds},
                       {"learning_rate", m.params.learning_rate},
                       {"max_depth", m.params.max_depth},
                       {"min_child_weight", m.params.min_child_weight},
                       {"lambda_l2", m.params.lambda_l2}};
      doc["base_score"] = m.base_score;
      doc["train_mse"] = m.train_mse;
      json trees = json::array();
      for (const auto& t : m.trees) trees.push_back(node_json(t, 0));
      doc["trees"] = std::move(trees);
      break;
    }
    case ModelKind::Mlp: {
      const auto& m = std::get<MlpModel>(model.impl);
      doc["params"] = {{"hidden_layers", m.params.hidden_layers},
                       {"max_iterations", m.params.max_iterations},
                       {"learning_rate_init", m.params.learning_rate_init},
                       {"batch_size", m.params.batch_size},
                       {"plateau_epochs", m.params.plateau_epochs},
                       {"tol", m.params.tol},
                       {"min_learning_rate", m.params.min_learning_rate},
                       {"alpha_l2", m.params.alpha_l2},
                       {"seed", m.params.seed}};
      doc["x_mean"] = m.x_mean;
      doc["x_scale"] = m.x_scale;
      doc["y_mean"] = m.y_mean;
      doc["y_scale"] = m.y_scale;
      doc["iterations"] = m.iterations;
      doc["loss_curve"] = m.loss_curve;
      json layers = json::array();
      for (const auto& l : m.layers) {
        layers.push_back({{"weights", matrix_json(l.weights)},
                          {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
      }
      doc["layers"] = std::move(layers);
      break;
    }
    case ModelKind::SeasonalNaive:
      doc["params"] = {{"column", std::get<SeasonalNaiveModel>(model.impl).column}};
      break;
  }
  return doc;
}

TrainedModel model_from_json(const json& doc) {
  TrainedModel model;
  model.kind = parse_model_kind(doc.at("kind").get<std::string>());
  model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
  const auto p = model.feature_names.size();
  switch (model.kind) {
    case ModelKind::Linear: {
      LinearModel m;
      m.mean = doc.at("mean").get<std::vector<double>>();
      m.scale = doc.at("scale").get<std::vector<double>>();
      m.coef = doc.at("coef").get<std::vector<double>>();
      m.intercept = doc.at("intercept").get<double>();
      if (m.mean.size() != p || m.scale.size() != p || m.coef.size() != p) {
        throw std::invalid_argument("linear model arrays do not match the feature count");
      }
      model.impl = std::move(m);
      break;
    }
    case ModelKind::Gbt: {
      GbtModel m;
      const auto& pr = doc.at("params");
      m.params.n_rounds = pr.at("n_rounds").get<int>();
      m.params.learning_rate = pr.at("learning_rate").get<double>();
      m.params.max_depth = pr.at("max_depth").get<int>();
      m.params.min_child_weight = pr.at("min_child_weight").get<double>();
      m.params.lambda_l2 = pr.at("lambda_l2").get<double>();
      m.base_score = doc.at("base_score").get<double>();
      if (doc.contains("train_mse")) m.train_mse = doc.at("train_mse").get<std::vector<double>>();
      for (const auto& t : doc.at("trees")) {
        Tree tree;
        node_from_json(t, tree);
        for (const auto& nd : tree.nodes) {
          if (!nd.is_leaf() && static_cast<std::size_t>(nd.feature) >= p) {
            throw std::invalid_argument("tree splits on feature index out of range");
          }
        }
        m.trees.push_back(std::move(tree));
      }
      model.impl = std::move(m);
      break;
    }
    case ModelKind::Mlp: {
      MlpModel m;
      const auto& pr = doc.at("params");
      m.params.hidden_layers = pr.at("hidden_layers").get<std::vector<int>>();
      m.params.max_iterations = pr.at("max_iterations").get<int>();
      m.params.learning_rate_init = pr.at("learning_rate_init").get<double>();
      m.params.batch_size = pr.at("batch_size").get<int>();
      m.params.plateau_epochs = pr.at("plateau_epochs").get<int>();
      m.params.tol = pr.at("tol").get<double>();
      m.params.min_learning_rate = pr.at("min_learning_rate").get<double>();
      m.params.alpha_l2 = pr.at("alpha_l2").get<double>();
      m.params.seed = pr.at("seed").get<std::uint64_t>();
      m.x_mean = doc.at("x_mean").get<std::vector<double>>();
      m.x_scale = doc.at("x_scale").get<std::vector<double>>();
      m.y_mean = doc.at("y_mean").get<double>();
      m.y_scale = doc.at("y_scale").get<double>();
      m.iterations = doc.at("iterations").get<int>();
      m.loss_curve = doc.at("loss_curve").get<std::vector<double>>();
      for (const auto& l : doc.at("layers")) {
        MlpLayer layer;
        layer.weights = matrix_from_json(l.at("weights"));
        auto b = l.at("bias").get<std::vector<double>>();
        layer.bias = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
        m.layers.push_back(std::move(layer));
      }
      model.impl = std::move(m);
      break;
    }
    case ModelKind::SeasonalNaive: {
      SeasonalNaiveModel m;
      m.column = doc.at("params").at("column").get<std::string>();
      model.impl = m;
      break;
    }
  }
  return model;
}

}  // namespace gridfeat
