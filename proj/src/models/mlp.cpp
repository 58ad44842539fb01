// Feedforward network: ReLU hidden layers, softmax output, categorical
// cross-entropy on integer labels, Adam updates.

#include "mlp_internal.hpp"

#include <numeric>

#include "persona/errors.hpp"

namespace persona::models::detail {

std::vector<double> mlp_init_params(const MlpLayout& layout, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> params(layout.total, 0.0);
  for (std::size_t l = 0; l < layout.layers(); ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(layout.sizes[l]));
    const std::size_t count = layout.sizes[l + 1] * layout.sizes[l];
    for (std::size_t i = 0; i < count; ++i) params[layout.w_offset[l] + i] = rng.normal() * scale;
  }
  return params;
}

double mlp_loss_and_grad(const std::vector<double>& params, const MlpLayout& layout,
                         const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         std::vector<double>& grad) {
  grad.assign(layout.total, 0.0);
  const double inv = 1.0 / static_cast<double>(x.size());
  double total_loss = 0.0;

  const std::size_t depth = layout.layers();
  std::vector<std::vector<double>> acts(depth + 1);  // post-activation per layer
  std::vector<double> delta, delta_prev;

  for (std::size_t s = 0; s < x.size(); ++s) {
    acts[0].assign(x[s].begin(), x[s].end());
    for (std::size_t l = 0; l < depth; ++l) {
      const std::size_t in = layout.sizes[l];
      const std::size_t out = layout.sizes[l + 1];
      acts[l + 1].assign(out, 0.0);
      const double* w = params.data() + layout.w_offset[l];
      const double* b = params.data() + layout.b_offset[l];
      for (std::size_t o = 0; o < out; ++o) {
        double acc = b[o];
        const double* row = w + o * in;
        for (std::size_t i = 0; i < in; ++i) acc += row[i] * acts[l][i];
        acts[l + 1][o] = (l + 1 < depth && acc < 0.0) ? 0.0 : acc;
      }
    }

    total_loss += mlp_cross_entropy(acts[depth], y[s]);
    delta = softmax(acts[depth]);
    delta[static_cast<std::size_t>(y[s])] -= 1.0;

    for (std::size_t l = depth; l-- > 0;) {
      const std::size_t in = layout.sizes[l];
      const std::size_t out = layout.sizes[l + 1];
      double* gw = grad.data() + layout.w_offset[l];
      double* gb = grad.data() + layout.b_offset[l];
      const double* w = params.data() + layout.w_offset[l];
      for (std::size_t o = 0; o < out; ++o) {
        const double dval = delta[o] * inv;
        gb[o] += dval;
        double* grow = gw + o * in;
        for (std::size_t i = 0; i < in; ++i) grow[i] += dval * acts[l][i];
      }
      if (l == 0) break;
      delta_prev.assign(in, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        const double* row = w + o * in;
        for (std::size_t i = 0; i < in; ++i) delta_prev[i] += row[i] * delta[o];
      }
      // ReLU mask of the previous layer
      for (std::size_t i = 0; i < in; ++i)
        if (acts[l][i] <= 0.0) delta_prev[i] = 0.0;
      delta.swap(delta_prev);
    }
  }
  return total_loss * inv;
}

namespace {

class Mlp final : public Classifier {
 public:
  Mlp(std::vector<std::size_t> sizes, std::vector<double> params)
      : layout_(sizes), params_(std::move(params)) {}

  std::size_t input_dim() const override { return layout_.sizes.front(); }
  std::size_t n_classes() const override { return layout_.sizes.back(); }

  std::vector<double> class_scores(std::span<const double> x) const override {
    std::vector<double> activation, scratch;
    mlp_forward_logits(params_, layout_, x, activation, scratch);
    return activation;
  }

  std::vector<double> predict_proba(std::span<const double> x) const override {
    return softmax(class_scores(x));
  }

  bool proba_calibrated() const override { return true; }

  json params_json() const override { return {{"sizes", layout_.sizes}, {"flat", params_}}; }

 private:
  MlpLayout layout_;
  std::vector<double> params_;
};

}  // namespace

std::shared_ptr<Classifier> train_mlp(const json& hp, const Dataset& d, std::uint64_t seed) {
  std::vector<std::size_t> sizes;
  sizes.push_back(d.dim());
  for (const auto& h : hp.at("hidden")) {
    const std::size_t width = h.get<std::size_t>();
    if (width < 1) throw Error("mlp hidden widths must be >= 1");
    sizes.push_back(width);
  }
  sizes.push_back(d.labels.size());

  const double lr = hp.at("lr").get<double>();
  const double beta1 = hp.at("beta1").get<double>();
  const double beta2 = hp.at("beta2").get<double>();
  const double epsilon = hp.at("epsilon").get<double>();
  const std::size_t epochs = hp.at("epochs").get<std::size_t>();
  const std::size_t batch_size = std::max<std::size_t>(1, hp.at("batch_size").get<std::size_t>());
  if (lr <= 0.0 || epochs < 1) throw Error("mlp lr must be positive and epochs >= 1");

  const MlpLayout layout(sizes);
  std::vector<double> params = mlp_init_params(layout, seed);
  std::vector<double> m(layout.total, 0.0), v(layout.total, 0.0), grad;

  Rng rng(seed + 1);  // data order; weight init consumed `seed`
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::vector<double>> batch_x;
  std::vector<int> batch_y;
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < d.size(); start += batch_size) {
      const std::size_t end = std::min(d.size(), start + batch_size);
      batch_x.clear();
      batch_y.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch_x.push_back(d.x[order[k]]);
        batch_y.push_back(d.y[order[k]]);
      }
      mlp_loss_and_grad(params, layout, batch_x, batch_y, grad);
      ++t;
      const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(t));
      const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(t));
      for (std::size_t i = 0; i < layout.total; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        params[i] -= lr * (m[i] / corr1) / (std::sqrt(v[i] / corr2) + epsilon);
      }
    }
  }
  return std::make_shared<Mlp>(std::move(sizes), std::move(params));
}

std::shared_ptr<Classifier> mlp_from_params(const json& params) {
  return std::make_shared<Mlp>(params.at("sizes").get<std::vector<std::size_t>>(),
                               params.at("flat").get<std::vector<double>>());
}

}  // namespace persona::models::detail

namespace persona::models {

double gradient_check(const MlpArchitecture& arch, const std::vector<std::vector<double>>& x,
                      const std::vector<int>& y, std::uint64_t seed, double step) {
  if (x.empty()) throw EmptyTestSet();
  std::vector<std::size_t> sizes;
  sizes.push_back(arch.input_dim);
  sizes.insert(sizes.end(), arch.hidden.begin(), arch.hidden.end());
  sizes.push_back(arch.output_dim);
  const detail::MlpLayout layout(sizes);

  const std::vector<double> params = detail::mlp_init_params(layout, seed);
  std::vector<double> analytic;
  detail::mlp_loss_and_grad(params, layout, x, y, analytic);

  // Central differences with an extended-precision forward pass.
  std::vector<long double> p(params.begin(), params.end());
  const long double h = static_cast<long double>(step);
  double max_rel = 0.0;
  for (std::size_t i = 0; i < layout.total; ++i) {
    const long double keep = p[i];
    p[i] = keep + h;
    const long double up = detail::mlp_batch_loss(p, layout, x, y);
    p[i] = keep - h;
    const long double down = detail::mlp_batch_loss(p, layout, x, y);
    p[i] = keep;
    const double numeric = static_cast<double>((up - down) / (2.0L * h));
    const double denom = std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-8);
    max_rel = std::max(max_rel, std::abs(analytic[i] - numeric) / denom);
  }
  return max_rel;
}

}  // namespace persona::models
