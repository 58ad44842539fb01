#include <doctest.h>

#include <cmath>

#include "models/mlp_internal.hpp"
#include "persona/models.hpp"
#include "persona/rng.hpp"

using namespace persona;
using namespace persona::models;

namespace {

std::vector<std::vector<double>> random_batch(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(dim);
    for (double& v : row) v = rng.normal();
    x.push_back(std::move(row));
  }
  return x;
}

std::vector<int> random_labels(std::size_t n, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> y(n);
  for (int& v : y) v = static_cast<int>(rng.index(classes));
  return y;
}

}  // namespace

TEST_CASE("gradient check passes on a small network") {
  MlpArchitecture arch;
  arch.input_dim = 4;
  arch.hidden = {3};
  arch.output_dim = 16;
  const auto x = random_batch(8, 4, 1);
  const auto y = random_labels(8, 16, 2);

  const double err = gradient_check(arch, x, y, 7);
  CHECK(err < 1e-4);

  // Doubling the step keeps the check under the looser bound.
  const double coarse = gradient_check(arch, x, y, 7, 2e-5);
  CHECK(coarse < 1e-3);
}

TEST_CASE("zero parameters give the closed-form softmax gradient") {
  // With all weights and biases zero, logits are zero, so the output
  // distribution is uniform and the bias gradient is softmax(0) - onehot
  // averaged over the batch. Hidden activations are zero, so every weight
  // gradient vanishes.
  const std::size_t classes = 4;
  detail::MlpLayout layout({5, 3, classes});
  std::vector<double> params(layout.total, 0.0);

  const auto x = random_batch(6, 5, 3);
  const std::vector<int> y = {0, 1, 2, 3, 0, 1};
  std::vector<double> grad;
  detail::mlp_loss_and_grad(params, layout, x, y, grad);

  std::vector<double> expected_bias(classes, 0.0);
  for (int label : y) {
    for (std::size_t c = 0; c < classes; ++c) expected_bias[c] += 1.0 / static_cast<double>(classes);
    expected_bias[static_cast<std::size_t>(label)] -= 1.0;
  }
  for (double& v : expected_bias) v /= static_cast<double>(y.size());

  const std::size_t bias_offset = layout.b_offset[1];
  for (std::size_t c = 0; c < classes; ++c)
    CHECK(grad[bias_offset + c] == doctest::Approx(expected_bias[c]).epsilon(1e-12));
  // Output-layer weights see zero hidden activations.
  for (std::size_t i = 0; i < layout.sizes[2] * layout.sizes[1]; ++i)
    CHECK(grad[layout.w_offset[1] + i] == 0.0);
}

TEST_CASE("both benchmark architectures construct and train at full width") {
  for (const std::vector<std::size_t> hidden :
       {std::vector<std::size_t>{100}, std::vector<std::size_t>{250, 250, 250}}) {
    Dataset d;
    for (int c = 0; c < 16; ++c) d.labels.push_back("c" + std::to_string(c));
    Rng rng(5);
    for (int i = 0; i < 32; ++i) {
      std::vector<double> row(1000, 0.0);
      for (int k = 0; k < 20; ++k) row[rng.index(1000)] = 1.0;
      d.x.push_back(std::move(row));
      d.y.push_back(static_cast<int>(i % 16));
    }
    ClassifierSpec spec;
    spec.algorithm = Algorithm::Mlp;
    spec.hyperparams = {{"hidden", hidden}, {"epochs", 1}};
    const auto model = train_classifier(spec, d);
    CHECK(model.input_dim() == 1000);
    CHECK(model.predict_proba(d.x[0]).size() == 16);
  }
}

TEST_CASE("mlp learns a small separable problem") {
  Dataset d;
  d.labels = {"a", "b", "c"};
  Rng rng(8);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 30; ++i) {
      const double angle = 2.094395 * c;  // 2*pi/3
      d.x.push_back({3.0 * std::cos(angle) + rng.normal() * 0.4,
                     3.0 * std::sin(angle) + rng.normal() * 0.4});
      d.y.push_back(c);
    }
  ClassifierSpec spec;
  spec.algorithm = Algorithm::Mlp;
  spec.hyperparams = {{"hidden", nlohmann::json::array({16})}, {"epochs", 200}, {"lr", 0.01}};
  const auto model = train_classifier(spec, d);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.x.size(); ++i)
    if (model.predict_id(d.x[i]) == d.y[i]) ++correct;
  CHECK(static_cast<double>(correct) / static_cast<double>(d.x.size()) >= 0.95);
}
