#include <cmath>
#include <numeric>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models::detail {

namespace {

// Bagged CART ensemble with per-split feature subsampling; majority vote,
// ties to the smallest label index.
class RandomForest final : public Classifier {
 public:
  RandomForest(std::vector<std::vector<TreeNode>> trees, std::size_t input_dim,
               std::size_t n_classes)
      : trees_(std::move(trees)), input_dim_(input_dim), n_classes_(n_classes) {}

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t n_classes() const override { return n_classes_; }

  std::vector<double> class_scores(std::span<const double> x) const override {
    std::vector<double> votes(n_classes_, 0.0);
    for (const auto& tree : trees_)
      votes[static_cast<std::size_t>(descend(tree, x).majority)] +=
          1.0 / static_cast<double>(trees_.size());
    return votes;
  }

  std::vector<double> predict_proba(std::span<const double> x) const override {
    return class_scores(x);  // vote shares
  }

  bool proba_calibrated() const override { return true; }

  json params_json() const override {
    json trees = json::array();
    for (const auto& t : trees_) trees.push_back(tree_to_json(t));
    return {{"trees", trees}, {"input_dim", input_dim_}, {"n_classes", n_classes_}};
  }

 private:
  std::vector<std::vector<TreeNode>> trees_;
  std::size_t input_dim_;
  std::size_t n_classes_;
};

}  // namespace

std::shared_ptr<Classifier> train_random_forest(const json& hp, const Dataset& d,
                                                std::uint64_t seed) {
  const std::size_t n_trees = hp.at("n_trees").get<std::size_t>();
  if (n_trees < 1) throw Error("random_forest n_trees must be >= 1");
  const bool bootstrap = hp.at("bootstrap").get<bool>();

  TreeParams params;
  params.max_depth = hp.at("max_depth").get<std::size_t>();
  params.min_leaf = std::max<std::size_t>(1, hp.at("min_leaf").get<std::size_t>());

  const std::size_t dim = d.dim();
  const auto& mf = hp.at("max_features");
  if (mf.is_string()) {
    const std::string s = mf.get<std::string>();
    if (s == "sqrt")
      params.max_features = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(dim)))));
    else if (s == "all")
      params.max_features = 0;
    else
      throw Error("random_forest max_features must be \"sqrt\", \"all\" or a count");
  } else {
    params.max_features = mf.get<std::size_t>();
    if (params.max_features > dim) params.max_features = 0;
  }

  Rng rng(seed);
  std::vector<std::vector<TreeNode>> trees;
  trees.reserve(n_trees);
  const std::size_t n = d.size();
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::vector<std::size_t> indices(n);
    if (bootstrap) {
      for (auto& i : indices) i = rng.index(n);
    } else {
      std::iota(indices.begin(), indices.end(), 0);
    }
    trees.push_back(build_classification_tree(d.x, d.y, indices, d.labels.size(), params, &rng));
  }
  return std::make_shared<RandomForest>(std::move(trees), dim, d.labels.size());
}

std::shared_ptr<Classifier> random_forest_from_params(const json& params) {
  std::vector<std::vector<TreeNode>> trees;
  for (const auto& t : params.at("trees")) trees.push_back(tree_from_json(t));
  return std::make_shared<RandomForest>(std::move(trees),
                                        params.at("input_dim").get<std::size_t>(),
                                        params.at("n_classes").get<std::size_t>());
}

}  // namespace persona::models::detail
