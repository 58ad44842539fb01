#pragma once

// Internal: flat-parameter MLP forward/backward shared by training, the
// finite-difference gradient check and white-box tests.

#include <cmath>
#include <span>
#include <vector>

#include "classifiers.hpp"

namespace persona::models::detail {

struct MlpLayout {
  std::vector<std::size_t> sizes;  // input, hidden..., output
  std::vector<std::size_t> w_offset;
  std::vector<std::size_t> b_offset;
  std::size_t total = 0;

  explicit MlpLayout(const std::vector<std::size_t>& layer_sizes) : sizes(layer_sizes) {
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      w_offset.push_back(total);
      total += sizes[l + 1] * sizes[l];
      b_offset.push_back(total);
      total += sizes[l + 1];
    }
  }

  std::size_t layers() const { return sizes.size() - 1; }
};

// He-style init: weights ~ N(0, sqrt(2/fan_in)), biases zero.
std::vector<double> mlp_init_params(const MlpLayout& layout, std::uint64_t seed);

template <typename T>
void mlp_forward_logits(const std::vector<T>& params, const MlpLayout& layout,
                        std::span<const double> x, std::vector<T>& activation,
                        std::vector<T>& next) {
  activation.assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layout.layers(); ++l) {
    const std::size_t in = layout.sizes[l];
    const std::size_t out = layout.sizes[l + 1];
    next.assign(out, T(0));
    const T* w = params.data() + layout.w_offset[l];
    const T* b = params.data() + layout.b_offset[l];
    for (std::size_t o = 0; o < out; ++o) {
      T acc = b[o];
      const T* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * activation[i];
      next[o] = acc;
    }
    if (l + 1 < layout.layers())
      for (T& v : next)
        if (v < T(0)) v = T(0);
    activation.swap(next);
  }
}

template <typename T>
T mlp_cross_entropy(const std::vector<T>& logits, int label) {
  T mx = logits[0];
  for (const T& v : logits)
    if (v > mx) mx = v;
  T sum = T(0);
  for (const T& v : logits) sum += std::exp(v - mx);
  return std::log(sum) - (logits[static_cast<std::size_t>(label)] - mx);
}

template <typename T>
T mlp_batch_loss(const std::vector<T>& params, const MlpLayout& layout,
                 const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  std::vector<T> activation, scratch;
  T total = T(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    mlp_forward_logits(params, layout, x[i], activation, scratch);
    total += mlp_cross_entropy(activation, y[i]);
  }
  return total / T(x.size());
}

// Mean cross-entropy over the batch plus its gradient, by backprop.
double mlp_loss_and_grad(const std::vector<double>& params, const MlpLayout& layout,
                         const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         std::vector<double>& grad);

}  // namespace persona::models::detail
