// CART trees: Gini classification and squared-error regression, shared by
// the plain tree, the forest and the boosting ensemble.

#include <cmath>
#include <numeric>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models::detail {

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Feature indices searched at a node, ascending. Consumes rng only when a
// proper subset is requested.
std::vector<std::size_t> node_features(std::size_t dim, std::size_t max_features, Rng* rng) {
  std::vector<std::size_t> all(dim);
  std::iota(all.begin(), all.end(), 0);
  if (max_features == 0 || max_features >= dim || rng == nullptr) return all;
  for (std::size_t i = 0; i < max_features; ++i) {
    const std::size_t j = i + rng->index(dim - i);
    std::swap(all[i], all[j]);
  }
  all.resize(max_features);
  std::sort(all.begin(), all.end());
  return all;
}

double gini_from_counts(const std::vector<double>& counts, double total) {
  double g = 1.0;
  for (double c : counts) {
    const double p = c / total;
    g -= p * p;
  }
  return g;
}

template <typename MakeLeaf, typename NodeImpurity>
class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& x, const TreeParams& params, Rng* rng,
              MakeLeaf make_leaf, NodeImpurity impurity)
      : x_(x), params_(params), rng_(rng), make_leaf_(make_leaf), impurity_(impurity) {}

  std::vector<TreeNode> build(std::vector<std::size_t> indices) {
    nodes_.clear();
    grow(std::move(indices), 1);
    return std::move(nodes_);
  }

 private:
  // Returns the node index. `impurity_` also proposes the best split.
  int grow(std::vector<std::size_t> indices, std::size_t depth) {
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    SplitChoice split;
    const bool depth_ok = params_.max_depth == 0 || depth <= params_.max_depth;
    if (depth_ok && indices.size() >= 2 * params_.min_leaf) {
      const auto features = node_features(x_.front().size(), params_.max_features, rng_);
      split = impurity_(indices, features, params_.min_leaf);
    }
    if (!split.found) {
      nodes_[static_cast<std::size_t>(node_index)] = make_leaf_(indices);
      return node_index;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t i : indices)
      (x_[i][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right)
          .push_back(i);
    indices.clear();
    indices.shrink_to_fit();

    const int left_index = grow(std::move(left), depth + 1);
    const int right_index = grow(std::move(right), depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(node_index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left_index;
    node.right = right_index;
    return node_index;
  }

  const std::vector<std::vector<double>>& x_;
  const TreeParams& params_;
  Rng* rng_;
  MakeLeaf make_leaf_;
  NodeImpurity impurity_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::vector<TreeNode> build_classification_tree(const std::vector<std::vector<double>>& x,
                                                const std::vector<int>& y,
                                                const std::vector<std::size_t>& indices,
                                                std::size_t n_classes, const TreeParams& params,
                                                Rng* rng) {
  auto make_leaf = [&](const std::vector<std::size_t>& idx) {
    TreeNode leaf;
    leaf.distribution.assign(n_classes, 0.0);
    for (std::size_t i : idx) leaf.distribution[static_cast<std::size_t>(y[i])] += 1.0;
    const double total = static_cast<double>(idx.size());
    std::size_t best = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (leaf.distribution[c] > leaf.distribution[best]) best = c;
      leaf.distribution[c] /= total;
    }
    leaf.majority = static_cast<int>(best);
    return leaf;
  };

  auto best_split = [&](const std::vector<std::size_t>& idx,
                        const std::vector<std::size_t>& features,
                        std::size_t min_leaf) {
    SplitChoice best;
    const double n = static_cast<double>(idx.size());
    std::vector<double> total_counts(n_classes, 0.0);
    for (std::size_t i : idx) total_counts[static_cast<std::size_t>(y[i])] += 1.0;
    const double parent_gini = gini_from_counts(total_counts, n);
    if (parent_gini <= 0.0) return best;  // pure node

    std::vector<std::pair<double, int>> sorted(idx.size());
    std::vector<double> left_counts(n_classes);
    for (std::size_t f : features) {
      bool constant = true;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        sorted[k] = {x[idx[k]][f], y[idx[k]]};
        constant = constant && sorted[k].first == sorted[0].first;
      }
      if (constant) continue;  // no threshold exists
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::fill(left_counts.begin(), left_counts.end(), 0.0);
      std::vector<double> right_counts = total_counts;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const auto c = static_cast<std::size_t>(sorted[k].second);
        left_counts[c] += 1.0;
        right_counts[c] -= 1.0;
        if (sorted[k].first == sorted[k + 1].first) continue;
        const std::size_t nl = k + 1, nr = sorted.size() - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double gain =
            parent_gini - (static_cast<double>(nl) * gini_from_counts(left_counts, static_cast<double>(nl)) +
                           static_cast<double>(nr) * gini_from_counts(right_counts, static_cast<double>(nr))) /
                              n;
        if (gain > best.gain + 1e-12 || (!best.found && gain > 1e-12)) {
          best.found = true;
          best.feature = static_cast<int>(f);
          best.threshold = (sorted[k].first + sorted[k + 1].first) / 2.0;
          best.gain = gain;
        }
      }
    }
    return best;
  };

  TreeBuilder builder(x, params, rng, make_leaf, best_split);
  return builder.build(indices);
}

std::vector<TreeNode> build_regression_tree(const std::vector<std::vector<double>>& x,
                                            const std::vector<double>& targets,
                                            const std::vector<std::size_t>& indices,
                                            const TreeParams& params, Rng* rng,
                                            const std::vector<std::vector<std::size_t>>* presorted) {
  auto make_leaf = [&](const std::vector<std::size_t>& idx) {
    TreeNode leaf;
    double sum = 0.0;
    for (std::size_t i : idx) sum += targets[i];
    leaf.value = idx.empty() ? 0.0 : sum / static_cast<double>(idx.size());
    return leaf;
  };

  std::vector<char> in_node(presorted ? x.size() : 0);

  auto best_split = [&, in_node](const std::vector<std::size_t>& idx,
                                 const std::vector<std::size_t>& features,
                                 std::size_t min_leaf) mutable {
    SplitChoice best;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i : idx) {
      sum += targets[i];
      sum_sq += targets[i] * targets[i];
    }
    const double n = static_cast<double>(idx.size());
    const double parent_sse = sum_sq - sum * sum / n;

    if (presorted) {
      std::fill(in_node.begin(), in_node.end(), 0);
      for (std::size_t i : idx) in_node[i] = 1;
    }

    auto consider = [&](std::size_t f, double boundary_lo, double boundary_hi, std::size_t nl_count,
                        double left_sum, double left_sq) {
      const double nl = static_cast<double>(nl_count);
      const double nr = n - nl;
      if (nl_count < min_leaf || idx.size() - nl_count < min_leaf) return;
      const double right_sum = sum - left_sum;
      const double right_sq = sum_sq - left_sq;
      const double sse =
          (left_sq - left_sum * left_sum / nl) + (right_sq - right_sum * right_sum / nr);
      const double gain = parent_sse - sse;
      if (gain > best.gain + 1e-12 || (!best.found && gain > 1e-12)) {
        best.found = true;
        best.feature = static_cast<int>(f);
        best.threshold = (boundary_lo + boundary_hi) / 2.0;
        best.gain = gain;
      }
    };

    if (presorted) {
      // Stream each feature's node members in presorted order; a split
      // candidate sits between every pair of distinct consecutive values.
      for (std::size_t f : features) {
        double left_sum = 0.0, left_sq = 0.0, prev = 0.0;
        std::size_t consumed = 0;
        for (std::size_t i : (*presorted)[f]) {
          if (!in_node[i]) continue;
          const double value = x[i][f];
          if (consumed > 0 && value != prev) consider(f, prev, value, consumed, left_sum, left_sq);
          left_sum += targets[i];
          left_sq += targets[i] * targets[i];
          ++consumed;
          prev = value;
        }
      }
      return best;
    }

    std::vector<std::pair<double, double>> sorted(idx.size());  // (feature value, target)
    for (std::size_t f : features) {
      bool constant = true;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        sorted[k] = {x[idx[k]][f], targets[idx[k]]};
        constant = constant && sorted[k].first == sorted[0].first;
      }
      if (constant) continue;  // no threshold exists
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      double left_sum = 0.0, left_sq = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        left_sum += sorted[k].second;
        left_sq += sorted[k].second * sorted[k].second;
        if (sorted[k].first == sorted[k + 1].first) continue;
        consider(f, sorted[k].first, sorted[k + 1].first, k + 1, left_sum, left_sq);
      }
    }
    return best;
  };

  TreeBuilder builder(x, params, rng, make_leaf, best_split);
  return builder.build(indices);
}

const TreeNode& descend(const std::vector<TreeNode>& nodes, std::span<const double> x) {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& node = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes[i];
}

json tree_to_json(const std::vector<TreeNode>& nodes) {
  json out = json::array();
  for (const auto& node : nodes) {
    if (node.feature < 0) {
      out.push_back({{"majority", node.majority},
                     {"dist", node.distribution},
                     {"value", node.value}});
    } else {
      out.push_back(
          {{"f", node.feature}, {"t", node.threshold}, {"l", node.left}, {"r", node.right}});
    }
  }
  return out;
}

std::vector<TreeNode> tree_from_json(const json& j) {
  std::vector<TreeNode> nodes;
  nodes.reserve(j.size());
  for (const auto& item : j) {
    TreeNode node;
    if (item.contains("f")) {
      node.feature = item.at("f").get<int>();
      node.threshold = item.at("t").get<double>();
      node.left = item.at("l").get<int>();
      node.right = item.at("r").get<int>();
    } else {
      node.majority = item.at("majority").get<int>();
      node.distribution = item.at("dist").get<std::vector<double>>();
      node.value = item.at("value").get<double>();
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

namespace {

class DecisionTree final : public Classifier {
 public:
  DecisionTree(std::vector<TreeNode> nodes, std::size_t input_dim, std::size_t n_classes)
      : nodes_(std::move(nodes)), input_dim_(input_dim), n_classes_(n_classes) {}

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t n_classes() const override { return n_classes_; }

  std::vector<double> class_scores(std::span<const double> x) const override {
    return descend(nodes_, x).distribution;
  }

  // Leaf class fractions; uncalibrated.
  std::vector<double> predict_proba(std::span<const double> x) const override {
    return descend(nodes_, x).distribution;
  }

  bool proba_calibrated() const override { return false; }

  json params_json() const override {
    return {{"nodes", tree_to_json(nodes_)},
            {"input_dim", input_dim_},
            {"n_classes", n_classes_}};
  }

 private:
  std::vector<TreeNode> nodes_;
  std::size_t input_dim_;
  std::size_t n_classes_;
};

}  // namespace

std::shared_ptr<Classifier> train_decision_tree(const json& hp, const Dataset& d,
                                                std::uint64_t /*seed*/) {
  TreeParams params;
  params.max_depth = hp.at("max_depth").get<std::size_t>();
  params.min_leaf = std::max<std::size_t>(1, hp.at("min_leaf").get<std::size_t>());
  std::vector<std::size_t> indices(d.size());
  std::iota(indices.begin(), indices.end(), 0);
  auto nodes = build_classification_tree(d.x, d.y, indices, d.labels.size(), params, nullptr);
  return std::make_shared<DecisionTree>(std::move(nodes), d.dim(), d.labels.size());
}

std::shared_ptr<Classifier> decision_tree_from_params(const json& params) {
  return std::make_shared<DecisionTree>(tree_from_json(params.at("nodes")),
                                        params.at("input_dim").get<std::size_t>(),
                                        params.at("n_classes").get<std::size_t>());
}

}  // namespace persona::models::detail
