// One-vs-rest gradient boosting: shallow regression trees fit to the
// first-order gradient of the logistic loss, with shrinkage.

#include <cmath>
#include <numeric>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models::detail {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

class GradientBoosting final : public Classifier {
 public:
  GradientBoosting(std::vector<double> base_scores,
                   std::vector<std::vector<std::vector<TreeNode>>> trees, double shrinkage,
                   std::size_t input_dim)
      : base_scores_(std::move(base_scores)), trees_(std::move(trees)), shrinkage_(shrinkage),
        input_dim_(input_dim) {}

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t n_classes() const override { return base_scores_.size(); }

  std::vector<double> class_scores(std::span<const double> x) const override {
    std::vector<double> scores(base_scores_);
    for (std::size_t c = 0; c < scores.size(); ++c)
      for (const auto& tree : trees_[c]) scores[c] += shrinkage_ * descend(tree, x).value;
    return scores;
  }

  // Per-class sigmoids normalized to a distribution.
  std::vector<double> predict_proba(std::span<const double> x) const override {
    std::vector<double> p = class_scores(x);
    double sum = 0.0;
    for (double& v : p) {
      v = sigmoid(v);
      sum += v;
    }
    if (sum <= 0.0) return std::vector<double>(p.size(), 1.0 / static_cast<double>(p.size()));
    for (double& v : p) v /= sum;
    return p;
  }

  bool proba_calibrated() const override { return true; }

  json params_json() const override {
    json per_class = json::array();
    for (const auto& class_trees : trees_) {
      json trees = json::array();
      for (const auto& t : class_trees) trees.push_back(tree_to_json(t));
      per_class.push_back(std::move(trees));
    }
    return {{"base_scores", base_scores_},
            {"trees", per_class},
            {"shrinkage", shrinkage_},
            {"input_dim", input_dim_}};
  }

 private:
  std::vector<double> base_scores_;                       // prior log-odds per class
  std::vector<std::vector<std::vector<TreeNode>>> trees_; // [class][round]
  double shrinkage_;
  std::size_t input_dim_;
};

}  // namespace

std::shared_ptr<Classifier> train_gradient_boosting(const json& hp, const Dataset& d,
                                                    std::uint64_t /*seed*/) {
  const std::size_t rounds = hp.at("rounds").get<std::size_t>();
  const double shrinkage = hp.at("shrinkage").get<double>();
  if (rounds < 1) throw Error("gradient_boosting rounds must be >= 1");
  if (shrinkage <= 0.0) throw Error("gradient_boosting shrinkage must be positive");

  TreeParams params;
  params.max_depth = hp.at("depth").get<std::size_t>();
  params.min_leaf = std::max<std::size_t>(1, hp.at("min_leaf").get<std::size_t>());

  const std::size_t n = d.size();
  const std::size_t n_classes = d.labels.size();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  // Feature columns never change across rounds; sort them once.
  std::vector<std::vector<std::size_t>> presorted(d.dim(), all);
  for (std::size_t f = 0; f < d.dim(); ++f)
    std::sort(presorted[f].begin(), presorted[f].end(), [&](std::size_t a, std::size_t b) {
      if (d.x[a][f] != d.x[b][f]) return d.x[a][f] < d.x[b][f];
      return a < b;
    });

  std::vector<double> base_scores(n_classes, 0.0);
  std::vector<std::vector<std::vector<TreeNode>>> trees(n_classes);
  std::vector<double> scores(n), residuals(n);

  for (std::size_t c = 0; c < n_classes; ++c) {
    double positives = 0.0;
    for (int label : d.y)
      if (label == static_cast<int>(c)) positives += 1.0;
    const double p = std::clamp(positives / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    base_scores[c] = std::log(p / (1.0 - p));

    std::fill(scores.begin(), scores.end(), base_scores[c]);
    trees[c].reserve(rounds);
    for (std::size_t round = 0; round < rounds; ++round) {
      for (std::size_t i = 0; i < n; ++i) {
        const double y = d.y[i] == static_cast<int>(c) ? 1.0 : 0.0;
        residuals[i] = y - sigmoid(scores[i]);
      }
      auto tree = build_regression_tree(d.x, residuals, all, params, nullptr, &presorted);
      for (std::size_t i = 0; i < n; ++i)
        scores[i] += shrinkage * descend(tree, d.x[i]).value;
      trees[c].push_back(std::move(tree));
    }
  }
  return std::make_shared<GradientBoosting>(std::move(base_scores), std::move(trees), shrinkage,
                                            d.dim());
}

std::shared_ptr<Classifier> gradient_boosting_from_params(const json& params) {
  std::vector<std::vector<std::vector<TreeNode>>> trees;
  for (const auto& class_trees : params.at("trees")) {
    std::vector<std::vector<TreeNode>> ts;
    for (const auto& t : class_trees) ts.push_back(tree_from_json(t));
    trees.push_back(std::move(ts));
  }
  return std::make_shared<GradientBoosting>(params.at("base_scores").get<std::vector<double>>(),
                                            std::move(trees),
                                            params.at("shrinkage").get<double>(),
                                            params.at("input_dim").get<std::size_t>());
}

}  // namespace persona::models::detail
