#pragma once

// Internal: concrete trainers/loaders per algorithm, shared by the dispatch
// in common.cpp and the container code in persist.cpp.

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "persona/models.hpp"
#include "persona/rng.hpp"

namespace persona::models::detail {

using persona::Rng;

using nlohmann::json;

// Ragged rows -> DimensionMismatch; fewer than 2 distinct labels -> SingleClass.
void check_dataset(const Dataset& d);

inline std::size_t argmax_smallest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

inline std::vector<double> softmax(std::vector<double> scores) {
  const double mx = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - mx);
    sum += s;
  }
  for (double& s : scores) s /= sum;
  return scores;
}

std::shared_ptr<Classifier> train_naive_bayes(const json& hp, const Dataset& d, std::uint64_t seed);
std::shared_ptr<Classifier> naive_bayes_from_params(const json& params);

std::shared_ptr<Classifier> train_logistic_regression(const json& hp, const Dataset& d,
                                                      std::uint64_t seed);
std::shared_ptr<Classifier> logistic_regression_from_params(const json& params);

std::shared_ptr<Classifier> train_linear_svm(const json& hp, const Dataset& d, std::uint64_t seed);
std::shared_ptr<Classifier> linear_svm_from_params(const json& params);

std::shared_ptr<Classifier> train_knn(const json& hp, const Dataset& d, std::uint64_t seed);
std::shared_ptr<Classifier> knn_from_params(const json& params);

std::shared_ptr<Classifier> train_decision_tree(const json& hp, const Dataset& d,
                                                std::uint64_t seed);
std::shared_ptr<Classifier> decision_tree_from_params(const json& params);

std::shared_ptr<Classifier> train_random_forest(const json& hp, const Dataset& d,
                                                std::uint64_t seed);
std::shared_ptr<Classifier> random_forest_from_params(const json& params);

std::shared_ptr<Classifier> train_gradient_boosting(const json& hp, const Dataset& d,
                                                    std::uint64_t seed);
std::shared_ptr<Classifier> gradient_boosting_from_params(const json& params);

std::shared_ptr<Classifier> train_mlp(const json& hp, const Dataset& d, std::uint64_t seed);
std::shared_ptr<Classifier> mlp_from_params(const json& params);

// --- decision trees (shared by tree/forest/boosting) -------------------------

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int majority = 0;                  // classification leaf
  std::vector<double> distribution;  // classification leaf: class fractions
  double value = 0.0;                // regression leaf
};

struct TreeParams {
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t min_leaf = 1;
  std::size_t max_features = 0;  // 0 = all; else sample this many per split
};

// CART with Gini impurity. Ties (equal gain) keep the lowest feature index
// and smallest threshold. `rng` is only consumed when max_features is in
// effect, so a forest tree with all features equals the plain tree.
std::vector<TreeNode> build_classification_tree(const std::vector<std::vector<double>>& x,
                                                const std::vector<int>& y,
                                                const std::vector<std::size_t>& indices,
                                                std::size_t n_classes, const TreeParams& params,
                                                Rng* rng);

// Regression tree on squared error; leaves hold the mean target. When
// `presorted` (per-feature sample order, ascending by value then index) is
// given, node scans gather from it instead of re-sorting; split choices are
// unchanged because equal feature values never admit a threshold.
std::vector<TreeNode> build_regression_tree(const std::vector<std::vector<double>>& x,
                                            const std::vector<double>& targets,
                                            const std::vector<std::size_t>& indices,
                                            const TreeParams& params, Rng* rng,
                                            const std::vector<std::vector<std::size_t>>* presorted
                                            = nullptr);

const TreeNode& descend(const std::vector<TreeNode>& nodes, std::span<const double> x);

json tree_to_json(const std::vector<TreeNode>& nodes);
std::vector<TreeNode> tree_from_json(const json& j);

}  // namespace persona::models::detail
