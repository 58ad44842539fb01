#include <algorithm>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models::detail {

namespace {

// Exhaustive k-nearest-neighbour vote. Neighbours are ordered by (squared
// distance, training index); vote ties go to the smallest label index.
class Knn final : public Classifier {
 public:
  Knn(std::vector<std::vector<double>> x, std::vector<int> y, std::size_t n_classes,
      std::size_t k)
      : x_(std::move(x)), y_(std::move(y)), n_classes_(n_classes), k_(k) {}

  std::size_t input_dim() const override { return x_.front().size(); }
  std::size_t n_classes() const override { return n_classes_; }

  std::vector<double> class_scores(std::span<const double> q) const override {
    std::vector<std::pair<double, std::size_t>> dist(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t f = 0; f < q.size(); ++f) {
        const double diff = x_[i][f] - q[f];
        d2 += diff * diff;
      }
      dist[i] = {d2, i};
    }
    const std::size_t k = std::min(k_, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<double> votes(n_classes_, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      votes[static_cast<std::size_t>(y_[dist[i].second])] += 1.0 / static_cast<double>(k);
    return votes;
  }

  std::vector<double> predict_proba(std::span<const double> q) const override {
    return class_scores(q);  // vote fractions, sum to 1
  }

  bool proba_calibrated() const override { return false; }

  json params_json() const override {
    return {{"x", x_}, {"y", y_}, {"n_classes", n_classes_}, {"k", k_}};
  }

 private:
  std::vector<std::vector<double>> x_;
  std::vector<int> y_;
  std::size_t n_classes_;
  std::size_t k_;
};

}  // namespace

std::shared_ptr<Classifier> train_knn(const json& hp, const Dataset& d, std::uint64_t /*seed*/) {
  const std::size_t k = hp.at("k").get<std::size_t>();
  if (k < 1) throw Error("knn k must be >= 1");
  return std::make_shared<Knn>(d.x, d.y, d.labels.size(), k);
}

std::shared_ptr<Classifier> knn_from_params(const json& params) {
  return std::make_shared<Knn>(params.at("x").get<std::vector<std::vector<double>>>(),
                               params.at("y").get<std::vector<int>>(),
                               params.at("n_classes").get<std::size_t>(),
                               params.at("k").get<std::size_t>());
}

}  // namespace persona::models::detail
