#include <cmath>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models::detail {

namespace {

// Multinomial naive Bayes with Laplace smoothing over non-negative counts.
class NaiveBayes final : public Classifier {
 public:
  NaiveBayes(std::vector<double> log_prior, std::vector<std::vector<double>> log_theta,
             double alpha)
      : log_prior_(std::move(log_prior)), log_theta_(std::move(log_theta)), alpha_(alpha) {}

  std::size_t input_dim() const override { return log_theta_.front().size(); }
  std::size_t n_classes() const override { return log_prior_.size(); }

  std::vector<double> class_scores(std::span<const double> x) const override {
    std::vector<double> scores(log_prior_);
    for (std::size_t c = 0; c < scores.size(); ++c) {
      const auto& theta = log_theta_[c];
      for (std::size_t i = 0; i < x.size(); ++i) scores[c] += x[i] * theta[i];
    }
    return scores;
  }

  std::vector<double> predict_proba(std::span<const double> x) const override {
    return softmax(class_scores(x));
  }

  bool proba_calibrated() const override { return true; }

  json params_json() const override {
    return {{"log_prior", log_prior_}, {"log_theta", log_theta_}, {"alpha", alpha_}};
  }

 private:
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_theta_;  // [class][feature]
  double alpha_;
};

}  // namespace

std::shared_ptr<Classifier> train_naive_bayes(const json& hp, const Dataset& d,
                                              std::uint64_t /*seed*/) {
  const double alpha = hp.at("alpha").get<double>();
  if (alpha <= 0.0) throw Error("naive_bayes alpha must be positive");
  const std::size_t n_classes = d.labels.size();
  const std::size_t dim = d.dim();

  std::vector<std::vector<double>> counts(n_classes, std::vector<double>(dim, 0.0));
  std::vector<double> class_docs(n_classes, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto c = static_cast<std::size_t>(d.y[i]);
    class_docs[c] += 1.0;
    for (std::size_t f = 0; f < dim; ++f) {
      if (d.x[i][f] < 0.0)
        throw NegativeFeature("naive_bayes requires non-negative features");
      counts[c][f] += d.x[i][f];
    }
  }

  std::vector<double> log_prior(n_classes);
  std::vector<std::vector<double>> log_theta(n_classes, std::vector<double>(dim));
  const double total_docs = static_cast<double>(d.size());
  for (std::size_t c = 0; c < n_classes; ++c) {
    // A class with no documents gets the uniform smoothed estimate.
    log_prior[c] = class_docs[c] > 0.0 ? std::log(class_docs[c] / total_docs) : -1e9;
    double total = 0.0;
    for (double v : counts[c]) total += v;
    const double denom = total + alpha * static_cast<double>(dim);
    for (std::size_t f = 0; f < dim; ++f)
      log_theta[c][f] = std::log((counts[c][f] + alpha) / denom);
  }
  return std::make_shared<NaiveBayes>(std::move(log_prior), std::move(log_theta), alpha);
}

std::shared_ptr<Classifier> naive_bayes_from_params(const json& params) {
  return std::make_shared<NaiveBayes>(params.at("log_prior").get<std::vector<double>>(),
                                      params.at("log_theta").get<std::vector<std::vector<double>>>(),
                                      params.at("alpha").get<double>());
}

}  // namespace persona::models::detail
