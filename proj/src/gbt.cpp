// Squared-error gradient boosting with exact greedy, level-wise tree growth.

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "gridfeat/models.hpp"

namespace gridfeat {

void GbtParams::validate() const {
  if (n_rounds < 1) throw std::invalid_argument("gbt n_rounds must be >= 1");
  if (!(learning_rate > 0)) throw std::invalid_argument("gbt learning_rate must be > 0");
  if (max_depth < 0) throw std::invalid_argument("gbt max_depth must be >= 0");
  if (!(min_child_weight >= 0)) throw std::invalid_argument("gbt min_child_weight must be >= 0");
  if (!(lambda_l2 >= 0)) throw std::invalid_argument("gbt lambda_l2 must be >= 0");
}

double Tree::predict(const double* x) const {
  int k = 0;
  while (!nodes[k].is_leaf()) k = x[nodes[k].feature] < nodes[k].threshold ? nodes[k].left : nodes[k].right;
  return nodes[k].leaf_value;
}

namespace {

struct Candidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

struct ScanState {
  double gl = 0.0;
  double hl = 0.0;
  double last = 0.0;
  bool has_last = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& m, const std::vector<std::vector<std::uint32_t>>& sorted, const GbtParams& params)
      : m_(m), sorted_(sorted), params_(params), n_(m.rows()), p_(m.cols()) {}

  Tree build(const std::vector<double>& grad) {
    Tree tree;
    std::vector<double> node_g(1, 0.0), node_h(1, static_cast<double>(n_));
    for (double g : grad) node_g[0] += g;
    tree.nodes.emplace_back();
    node_of_.assign(n_, 0);
    std::vector<int> frontier = {0};

    for (int depth = 0; depth < params_.max_depth && !frontier.empty(); ++depth) {
      std::vector<int> slot_of(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < frontier.size(); ++s) slot_of[frontier[s]] = static_cast<int>(s);
      std::vector<Candidate> best(frontier.size());

      for (std::size_t f = 0; f < p_; ++f) {
        std::vector<ScanState> state(frontier.size());
        for (auto i : sorted_[f]) {
          const int s = slot_of[node_of_[i]];
          if (s < 0) continue;
          const double x = m_.at(i, f);
          auto& st = state[s];
          if (st.has_last && x > st.last) {
            const int node = frontier[s];
            const double g = node_g[node], h = node_h[node];
            const double gr = g - st.gl, hr = h - st.hl;
            if (st.hl >= params_.min_child_weight && hr >= params_.min_child_weight) {
              const double lam = params_.lambda_l2;
              const double gain = st.gl * st.gl / (st.hl + lam) + gr * gr / (hr + lam) - g * g / (h + lam);
              if (gain > best[s].gain) {
                double mid = st.last + (x - st.last) / 2.0;
                if (mid <= st.last) mid = x;
                best[s] = {gain, static_cast<int>(f), mid};
              }
            }
          }
          st.gl += grad[i];
          st.hl += 1.0;
          st.last = x;
          st.has_last = true;
        }
      }

      std::vector<int> next;
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        if (best[s].feature < 0) continue;
        const int node = frontier[s];
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        node_g.resize(tree.nodes.size(), 0.0);
        node_h.resize(tree.nodes.size(), 0.0);
        tree.nodes[node].feature = best[s].feature;
        tree.nodes[node].threshold = best[s].threshold;
        tree.nodes[node].left = left;
        tree.nodes[node].right = left + 1;
        next.push_back(left);
        next.push_back(left + 1);
      }
      if (next.empty()) break;
      for (std::size_t i = 0; i < n_; ++i) {
        const auto& nd = tree.nodes[node_of_[i]];
        if (nd.is_leaf() || slot_of[node_of_[i]] < 0) continue;
        node_of_[i] = m_.at(i, nd.feature) < nd.threshold ? nd.left : nd.right;
        node_g[node_of_[i]] += grad[i];
        node_h[node_of_[i]] += 1.0;
      }
      frontier = std::move(next);
    }

    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      auto& nd = tree.nodes[k];
      nd.cover = node_h[k];
      if (nd.is_leaf()) nd.leaf_value = -node_g[k] / (node_h[k] + params_.lambda_l2) * params_.learning_rate;
    }
    return tree;
  }

 private:
  const FeatureMatrix& m_;
  const std::vector<std::vector<std::uint32_t>>& sorted_;
  const GbtParams& params_;
  std::size_t n_, p_;
  std::vector<int> node_of_;
};

}  // namespace

TrainedModel fit_gbt(const FeatureMatrix& train, const GbtParams& params) {
  params.validate();
  require_finite(train);
  const auto n = train.rows(), p = train.cols();
  if (n < 2) throw std::invalid_argument("gbt fit needs at least 2 rows");

  std::vector<std::vector<std::uint32_t>> sorted(p, std::vector<std::uint32_t>(n));
  for (std::size_t f = 0; f < p; ++f) {
    std::iota(sorted[f].begin(), sorted[f].end(), 0u);
    std::stable_sort(sorted[f].begin(), sorted[f].end(),
                     [&](std::uint32_t a, std::uint32_t b) { return train.at(a, f) < train.at(b, f); });
  }

  GbtModel model;
  model.params = params;
  model.base_score = std::accumulate(train.target.begin(), train.target.end(), 0.0) / static_cast<double>(n);
  std::vector<double> pred(n, model.base_score), grad(n);
  TreeBuilder builder(train, sorted, params);
  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) grad[i] = pred[i] - train.target[i];
    model.trees.push_back(builder.build(grad));
    const auto& tree = model.trees.back();
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] += tree.predict(&train.values[i * p]);
      sse += (pred[i] - train.target[i]) * (pred[i] - train.target[i]);
    }
    model.train_mse.push_back(sse / static_cast<double>(n));
  }

  TrainedModel out;
  out.kind = ModelKind::Gbt;
  out.feature_names = train.column_names();
  out.impl = std::move(model);
  return out;
}

}  // namespace gridfeat
