#include "gridfeat/explain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gridfeat/csv.hpp"
#include "gridfeat/parallel.hpp"

namespace gridfeat {

double ShapExplanation::local_accuracy_error() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double s = base_value;
    for (std::size_t j = 0; j < cols(); ++j) s += at(r, j);
    worst = std::max(worst, std::abs(s - predictions[r]));
  }
  return worst;
}

namespace {

// --- interventional ------------------------------------------------------------

// factor[a][b] = a! b! / (a + b + 1)!
class ShapleyWeights {
 public:
  explicit ShapleyWeights(int max_depth) : n_(max_depth + 1), w_(n_ * n_) {
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        w_[a * n_ + b] = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
      }
    }
  }
  double operator()(int a, int b) const { return w_[a * n_ + b]; }

 private:
  int n_;
  std::vector<double> w_;
};

struct InterventionalWalk {
  const Tree& tree;
  const double* x;
  const double* r;
  const ShapleyWeights& w;
  double* phi;
  std::vector<int> in_a, in_b;  // features sent to the x side / reference side

  void run(int k) {
    const auto& nd = tree.nodes[k];
    if (nd.is_leaf()) {
      const int a = static_cast<int>(in_a.size()), b = static_cast<int>(in_b.size());
      if (a > 0) {
        const double pos = nd.leaf_value * w(a - 1, b);
        for (int j : in_a) phi[j] += pos;
      }
      if (b > 0) {
        const double neg = nd.leaf_value * w(a, b - 1);
        for (int j : in_b) phi[j] -= neg;
      }
      return;
    }
    const int f = nd.feature;
    const int xs = x[f] < nd.threshold ? nd.left : nd.right;
    const int rs = r[f] < nd.threshold ? nd.left : nd.right;
    if (xs == rs) return run(xs);
    if (std::find(in_a.begin(), in_a.end(), f) != in_a.end()) return run(xs);
    if (std::find(in_b.begin(), in_b.end(), f) != in_b.end()) return run(rs);
    in_a.push_back(f);
    run(xs);
    in_a.pop_back();
    in_b.push_back(f);
    run(rs);
    in_b.pop_back();
  }
};

int tree_depth(const Tree& t, int k = 0) {
  const auto& nd = t.nodes[k];
  if (nd.is_leaf()) return 0;
  return 1 + std::max(tree_depth(t, nd.left), tree_depth(t, nd.right));
}

// --- path-dependent -------------------------------------------------------------

struct PathElement {
  int feature = -1;
  double zero = 0.0;
  double one = 0.0;
  double weight = 0.0;
};

void extend_path(std::vector<PathElement>& path, int depth, double zero, double one, int feature) {
  path[depth] = {feature, zero, one, depth == 0 ? 1.0 : 0.0};
  for (int i = depth - 1; i >= 0; --i) {
    path[i + 1].weight += one * path[i].weight * (i + 1) / static_cast<double>(depth + 1);
    path[i].weight = zero * path[i].weight * (depth - i) / static_cast<double>(depth + 1);
  }
}

void unwind_path(std::vector<PathElement>& path, int depth, int index) {
  const double one = path[index].one, zero = path[index].zero;
  double next = path[depth].weight;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = path[i].weight;
      path[i].weight = next * (depth + 1) / ((i + 1) * one);
      next = tmp - path[i].weight * zero * (depth - i) / static_cast<double>(depth + 1);
    } else {
      path[i].weight = path[i].weight * (depth + 1) / (zero * (depth - i));
    }
  }
  for (int i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero = path[i + 1].zero;
    path[i].one = path[i + 1].one;
  }
}

double unwound_sum(const std::vector<PathElement>& path, int depth, int index) {
  const double one = path[index].one, zero = path[index].zero;
  double next = path[depth].weight, total = 0.0;
  for (int i = depth - 1; i >= 0; --i) {
    if (one != 0.0) {
      const double tmp = next * (depth + 1) / ((i + 1) * one);
      total += tmp;
      next = path[i].weight - tmp * zero * (depth - i) / static_cast<double>(depth + 1);
    } else {
      total += path[i].weight / zero / ((depth - i) / static_cast<double>(depth + 1));
    }
  }
  return total;
}

void path_dependent(const Tree& tree, const double* x, double* phi, int k, std::vector<PathElement> path, int depth,
                    double zero, double one, int feature) {
  path.resize(std::max<std::size_t>(path.size(), depth + 1));
  extend_path(path, depth, zero, one, feature);
  const auto& nd = tree.nodes[k];
  if (nd.is_leaf()) {
    for (int i = 1; i <= depth; ++i) {
      const double w = unwound_sum(path, depth, i);
      phi[path[i].feature] += w * (path[i].one - path[i].zero) * nd.leaf_value;
    }
    return;
  }
  const int hot = x[nd.feature] < nd.threshold ? nd.left : nd.right;
  const int cold = hot == nd.left ? nd.right : nd.left;
  double iz = 1.0, io = 1.0;
  int k_prev = -1;
  for (int i = 1; i <= depth; ++i) {
    if (path[i].feature == nd.feature) {
      k_prev = i;
      break;
    }
  }
  if (k_prev >= 0) {
    iz = path[k_prev].zero;
    io = path[k_prev].one;
    unwind_path(path, depth, k_prev);
    --depth;
  }
  path_dependent(tree, x, phi, hot, path, depth + 1, iz * tree.nodes[hot].cover / nd.cover, io, nd.feature);
  path_dependent(tree, x, phi, cold, path, depth + 1, iz * tree.nodes[cold].cover / nd.cover, 0.0, nd.feature);
}

double cover_expectation(const Tree& t, int k = 0) {
  const auto& nd = t.nodes[k];
  if (nd.is_leaf()) return nd.leaf_value;
  return (t.nodes[nd.left].cover * cover_expectation(t, nd.left) +
          t.nodes[nd.right].cover * cover_expectation(t, nd.right)) /
         nd.cover;
}

void require_same_columns(const TrainedModel& model, const FeatureMatrix& m, const char* what) {
  if (m.column_names() != model.feature_names) {
    throw std::invalid_argument(std::string(what) + " columns do not match the fitted model");
  }
}

}  // namespace

std::vector<double> tree_shap_single(const Tree& tree, const double* x, const double* reference,
                                     std::size_t features) {
  std::vector<double> phi(features, 0.0);
  ShapleyWeights w(tree_depth(tree));
  InterventionalWalk walk{tree, x, reference, w, phi.data(), {}, {}};
  walk.run(0);
  return phi;
}

ShapExplanation tree_shap(const TrainedModel& model, const FeatureMatrix& samples, const FeatureMatrix& background,
                          const ShapOptions& options) {
  if (model.kind != ModelKind::Gbt) {
    throw std::invalid_argument("tree_shap needs a gbt model; use brute_force_shap for " +
                                std::string(to_string(model.kind)) + " models");
  }
  require_same_columns(model, samples, "sample");
  const auto& gbt = model.gbt();
  const auto p = samples.cols();
  const auto n = samples.rows();

  ShapExplanation e;
  e.feature_names = model.feature_names;
  e.rows = n;
  e.phi.assign(n * p, 0.0);
  e.predictions = predict(model, samples);

  int depth = 0;
  for (const auto& t : gbt.trees) depth = std::max(depth, tree_depth(t));
  const ShapleyWeights weights(depth);

  if (options.mode == ShapMode::Interventional) {
    require_same_columns(model, background, "background");
    const auto nb = background.rows();
    if (nb == 0) throw std::invalid_argument("interventional SHAP needs at least one background row");
    double base = 0.0;
    for (std::size_t b = 0; b < nb; ++b) base += predict_row(model, &background.values[b * p]);
    e.base_value = base / static_cast<double>(nb);
    parallel_for(n, std::max<std::size_t>(1, options.jobs), [&](std::size_t r) {
      double* phi = &e.phi[r * p];
      const double* x = &samples.values[r * p];
      for (std::size_t b = 0; b < nb; ++b) {
        const double* ref = &background.values[b * p];
        for (const auto& t : gbt.trees) {
          InterventionalWalk walk{t, x, ref, weights, phi, {}, {}};
          walk.run(0);
        }
      }
      for (std::size_t j = 0; j < p; ++j) phi[j] /= static_cast<double>(nb);
    });
  } else {
    double base = gbt.base_score;
    for (const auto& t : gbt.trees) base += cover_expectation(t);
    e.base_value = base;
    parallel_for(n, std::max<std::size_t>(1, options.jobs), [&](std::size_t r) {
      double* phi = &e.phi[r * p];
      const double* x = &samples.values[r * p];
      for (const auto& t : gbt.trees) path_dependent(t, x, phi, 0, {}, 0, 1.0, 1.0, -1);
    });
  }
  return e;
}

std::vector<double> brute_force_shap(const TrainedModel& model, const double* x, const FeatureMatrix& background) {
  const auto m = model.feature_names.size();
  if (m > 12) {
    throw std::invalid_argument("brute_force_shap refuses " + std::to_string(m) + " features (limit 12)");
  }
  require_same_columns(model, background, "background");
  const auto nb = background.rows();
  if (nb == 0) throw std::invalid_argument("brute_force_shap needs at least one background row");

  const std::size_t subsets = std::size_t{1} << m;
  std::vector<double> v(subsets, 0.0);
  std::vector<double> z(m);
  for (std::size_t s = 0; s < subsets; ++s) {
    double sum = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t j = 0; j < m; ++j) z[j] = (s >> j) & 1 ? x[j] : background.at(b, j);
      sum += predict_row(model, z.data());
    }
    v[s] = sum / static_cast<double>(nb);
  }
  std::vector<double> fact(m + 1, 1.0);
  for (std::size_t k = 1; k <= m; ++k) fact[k] = fact[k - 1] * static_cast<double>(k);
  std::vector<double> phi(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t s = 0; s < subsets; ++s) {
      if ((s >> j) & 1) continue;
      const auto size = static_cast<std::size_t>(__builtin_popcountll(s));
      const double w = fact[size] * fact[m - size - 1] / fact[m];
      phi[j] += w * (v[s | (std::size_t{1} << j)] - v[s]);
    }
  }
  return phi;
}

FeatureMatrix subsample_rows(const FeatureMatrix& matrix, std::size_t max_rows) {
  const auto n = matrix.rows();
  if (max_rows == 0 || n <= max_rows) return matrix;
  FeatureMatrix out;
  out.columns = matrix.columns;
  out.parents = matrix.parents;
  out.households = matrix.households;
  for (std::size_t i = 0; i < max_rows; ++i) {
    const auto r = i * n / max_rows;
    out.row_household.push_back(matrix.row_household[r]);
    out.row_hours.push_back(matrix.row_hours[r]);
    out.target.push_back(matrix.target[r]);
    out.values.insert(out.values.end(), matrix.values.begin() + r * matrix.cols(),
                      matrix.values.begin() + (r + 1) * matrix.cols());
  }
  return out;
}

std::vector<double> mean_abs_phi(const ShapExplanation& e) {
  std::vector<double> out(e.cols(), 0.0);
  for (std::size_t r = 0; r < e.rows; ++r) {
    for (std::size_t j = 0; j < e.cols(); ++j) out[j] += std::abs(e.at(r, j));
  }
  if (e.rows > 0) {
    for (auto& v : out) v /= static_cast<double>(e.rows);
  }
  return out;
}

GroupContribution group_contributions(const ShapExplanation& e, const std::vector<FeatureDescriptor>& columns,
                                      const std::vector<std::string>& parents) {
  if (columns.size() != e.cols()) throw std::invalid_argument("descriptor count does not match the explanation");
  if (!parents.empty() && parents.size() != columns.size()) {
    throw std::invalid_argument("parent list does not match the descriptor count");
  }
  GroupContribution g;
  std::array<std::set<std::string>, 3> members;
  const auto imp = mean_abs_phi(e);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto k = static_cast<int>(columns[j].group);
    members[k].insert(parents.empty() ? columns[j].name : parents[j]);
    g.importance[k] += imp[j];
  }
  const double total = g.importance[0] + g.importance[1] + g.importance[2];
  if (!(total > 0)) throw std::invalid_argument("explanation has no attribution mass to share");
  for (int k = 0; k < 3; ++k) {
    g.feature_counts[k] = members[k].size();
    g.share_percent[k] = 100.0 * g.importance[k] / total;
  }
  return g;
}

std::string explanation_csv(const ShapExplanation& e, const FeatureMatrix& matrix) {
  if (matrix.column_names() != e.feature_names) throw std::invalid_argument("matrix does not match the explanation");
  const auto imp = mean_abs_phi(e);
  std::string out = "feature,parent,group,taxonomy_path,mean_abs_phi\n";
  for (std::size_t j = 0; j < e.cols(); ++j) {
    const auto& d = matrix.columns[j];
    out += d.name + "," + matrix.parents[j] + "," + std::string(to_string(d.group)) + "," + d.taxonomy_path + "," +
           csv::format_double(imp[j]) + "\n";
  }
  return out;
}

nlohmann::json group_summary_json(const GroupContribution& g) {
  nlohmann::json doc = nlohmann::json::object();
  nlohmann::json counts = nlohmann::json::object(), shares = nlohmann::json::object();
  for (auto group : kAllGroups) {
    const auto k = static_cast<int>(group);
    counts[std::string(to_string(group))] = g.feature_counts[k];
    shares[std::string(to_string(group))] = g.share_percent[k];
  }
  doc["feature_counts"] = counts;
  doc["total_features"] = g.feature_counts[0] + g.feature_counts[1] + g.feature_counts[2];
  doc["share_percent"] = shares;
  return doc;
}

}  // namespace gridfeat
