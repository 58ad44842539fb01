// Softmax regression (mini-batch Adam) and one-vs-rest linear SVM
// (Pegasos-style stochastic subgradient descent).

#include <cmath>
#include <numeric>

#include "classifiers.hpp"
#include "persona/errors.hpp"

namespace persona::models::detail {

namespace {

class SoftmaxRegression final : public Classifier {
 public:
  SoftmaxRegression(std::vector<std::vector<double>> weights, std::vector<double> bias)
      : weights_(std::move(weights)), bias_(std::move(bias)) {}

  std::size_t input_dim() const override { return weights_.front().size(); }
  std::size_t n_classes() const override { return bias_.size(); }

  std::vector<double> class_scores(std::span<const double> x) const override {
    std::vector<double> logits(bias_);
    for (std::size_t c = 0; c < logits.size(); ++c) {
      const auto& w = weights_[c];
      for (std::size_t i = 0; i < x.size(); ++i) logits[c] += w[i] * x[i];
    }
    return logits;
  }

  std::vector<double> predict_proba(std::span<const double> x) const override {
    return softmax(class_scores(x));
  }

  bool proba_calibrated() const override { return true; }

  json params_json() const override { return {{"weights", weights_}, {"bias", bias_}}; }

 private:
  std::vector<std::vector<double>> weights_;  // [class][feature]
  std::vector<double> bias_;
};

class LinearSvm final : public Classifier {
 public:
  explicit LinearSvm(std::vector<std::vector<double>> weights)  // per class, bias last
      : weights_(std::move(weights)) {}

  std::size_t input_dim() const override { return weights_.front().size() - 1; }
  std::size_t n_classes() const override { return weights_.size(); }

  std::vector<double> class_scores(std::span<const double> x) const override {
    std::vector<double> margins(weights_.size());
    for (std::size_t c = 0; c < weights_.size(); ++c) {
      const auto& w = weights_[c];
      double m = w.back();  // bias term (constant feature 1)
      for (std::size_t i = 0; i < x.size(); ++i) m += w[i] * x[i];
      margins[c] = m;
    }
    return margins;
  }

  // Softmax of raw margins; uncalibrated.
  std::vector<double> predict_proba(std::span<const double> x) const override {
    return softmax(class_scores(x));
  }

  bool proba_calibrated() const override { return false; }

  json params_json() const override { return {{"weights", weights_}}; }

 private:
  std::vector<std::vector<double>> weights_;
};

}  // namespace

std::shared_ptr<Classifier> train_logistic_regression(const json& hp, const Dataset& d,
                                                      std::uint64_t seed) {
  const double lr = hp.at("lr").get<double>();
  const std::size_t epochs = hp.at("epochs").get<std::size_t>();
  const std::size_t batch_size = std::max<std::size_t>(1, hp.at("batch_size").get<std::size_t>());
  const double l2 = hp.at("l2").get<double>();
  if (lr <= 0.0) throw Error("logistic_regression lr must be positive");
  if (epochs < 1) throw Error("logistic_regression epochs must be >= 1");

  const std::size_t n = d.size();
  const std::size_t dim = d.dim();
  const std::size_t n_classes = d.labels.size();

  std::vector<std::vector<double>> w(n_classes, std::vector<double>(dim, 0.0));
  std::vector<double> b(n_classes, 0.0);
  std::vector<std::vector<double>> mw(n_classes, std::vector<double>(dim, 0.0)), vw = mw;
  std::vector<double> mb(n_classes, 0.0), vb(n_classes, 0.0);
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> gw(n_classes, std::vector<double>(dim));
  std::vector<double> gb(n_classes);

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t end = std::min(n, start + batch_size);
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& row : gw) std::fill(row.begin(), row.end(), 0.0);
      std::fill(gb.begin(), gb.end(), 0.0);

      for (std::size_t k = start; k < end; ++k) {
        const auto& x = d.x[order[k]];
        std::vector<double> logits(b);
        for (std::size_t c = 0; c < n_classes; ++c)
          for (std::size_t i = 0; i < dim; ++i) logits[c] += w[c][i] * x[i];
        std::vector<double> p = softmax(std::move(logits));
        p[static_cast<std::size_t>(d.y[order[k]])] -= 1.0;
        for (std::size_t c = 0; c < n_classes; ++c) {
          const double g = p[c] * inv;
          if (g == 0.0) continue;
          gb[c] += g;
          for (std::size_t i = 0; i < dim; ++i) gw[c][i] += g * x[i];
        }
      }
      if (l2 > 0.0)
        for (std::size_t c = 0; c < n_classes; ++c)
          for (std::size_t i = 0; i < dim; ++i) gw[c][i] += l2 * w[c][i];

      ++t;
      const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(t));
      const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(t));
      for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < dim; ++i) {
          mw[c][i] = beta1 * mw[c][i] + (1.0 - beta1) * gw[c][i];
          vw[c][i] = beta2 * vw[c][i] + (1.0 - beta2) * gw[c][i] * gw[c][i];
          w[c][i] -= lr * (mw[c][i] / corr1) / (std::sqrt(vw[c][i] / corr2) + eps);
        }
        mb[c] = beta1 * mb[c] + (1.0 - beta1) * gb[c];
        vb[c] = beta2 * vb[c] + (1.0 - beta2) * gb[c] * gb[c];
        b[c] -= lr * (mb[c] / corr1) / (std::sqrt(vb[c] / corr2) + eps);
      }
    }
  }
  return std::make_shared<SoftmaxRegression>(std::move(w), std::move(b));
}

std::shared_ptr<Classifier> logistic_regression_from_params(const json& params) {
  return std::make_shared<SoftmaxRegression>(
      params.at("weights").get<std::vector<std::vector<double>>>(),
      params.at("bias").get<std::vector<double>>());
}

std::shared_ptr<Classifier> train_linear_svm(const json& hp, const Dataset& d,
                                             std::uint64_t seed) {
  const double lambda = hp.at("lambda").get<double>();
  const std::size_t epochs = hp.at("epochs").get<std::size_t>();
  if (lambda <= 0.0) throw Error("linear_svm lambda must be positive");

  const std::size_t n = d.size();
  const std::size_t dim = d.dim();
  const std::size_t n_classes = d.labels.size();

  // One weight vector per class, with the bias folded in as a last
  // constant-1 feature.
  std::vector<std::vector<double>> w(n_classes, std::vector<double>(dim + 1, 0.0));
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t c = 0; c < n_classes; ++c) {
    auto& wc = w[c];
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      rng.shuffle(order);
      for (std::size_t k = 0; k < n; ++k) {
        const auto& x = d.x[order[k]];
        const double y = d.y[order[k]] == static_cast<int>(c) ? 1.0 : -1.0;
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        double margin = wc.back();
        for (std::size_t i = 0; i < dim; ++i) margin += wc[i] * x[i];
        const double decay = 1.0 - eta * lambda;
        for (double& wi : wc) wi *= decay;
        if (y * margin < 1.0) {
          for (std::size_t i = 0; i < dim; ++i) wc[i] += eta * y * x[i];
          wc.back() += eta * y;
        }
      }
    }
  }
  return std::make_shared<LinearSvm>(std::move(w));
}

std::shared_ptr<Classifier> linear_svm_from_params(const json& params) {
  return std::make_shared<LinearSvm>(params.at("weights").get<std::vector<std::vector<double>>>());
}

}  // namespace persona::models::detail
