#include "padkit/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "padkit/error.hpp"

namespace padkit {
namespace {

// Uniform double in [lo, hi) from the top 53 bits of one draw, so the
// sequence is identical across standard library implementations.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

void check_dim(const MlpHead& head, std::size_t dim) {
  if (dim != head.input_dim()) {
    throw Error(ErrorCode::DimMismatch,
                "input has dim " + std::to_string(dim) + ", head expects " + std::to_string(head.input_dim()));
  }
}

void check_batch(const MlpHead& head, const Batch& batch) {
  check_dim(head, batch.dim);
  if (batch.rows() == 0) throw Error(ErrorCode::DegenerateData, "empty batch");
  if (batch.features.size() != batch.rows() * batch.dim) {
    throw Error(ErrorCode::DimMismatch, "feature buffer does not match rows x dim");
  }
  if (!batch.weights.empty() && batch.weights.size() != batch.rows()) {
    throw Error(ErrorCode::DimMismatch, "weight count does not match row count");
  }
}

// Hidden pre-activations into `pre`; returns the logit.
double hidden_and_logit(const MlpHead& head, const double* x, std::vector<double>& pre) {
  const std::size_t d = head.input_dim();
  const std::size_t h = head.hidden_width();
  const auto w1 = head.w1();
  const auto b1 = head.b1();
  const auto w2 = head.w2();
  pre.resize(h);
  double out = head.b2();
  for (std::size_t j = 0; j < h; ++j) {
    const double* wj = w1.data() + j * d;
    double z = b1[j];
    for (std::size_t k = 0; k < d; ++k) z += wj[k] * x[k];
    pre[j] = z;
    if (z > 0.0) out += w2[j] * z;
  }
  return out;
}

}  // namespace

MlpHead::MlpHead(std::size_t input_dim, std::size_t hidden_width)
    : input_dim_(input_dim), hidden_width_(hidden_width), params_(hidden_width * input_dim + 2 * hidden_width + 1, 0.0) {}

MlpHead MlpHead::he_uniform(std::size_t input_dim, std::size_t hidden_width, std::mt19937_64& rng) {
  MlpHead head(input_dim, hidden_width);
  const double limit1 = std::sqrt(6.0 / static_cast<double>(input_dim));
  const double limit2 = std::sqrt(6.0 / static_cast<double>(hidden_width));
  for (double& w : head.w1()) w = uniform(rng, -limit1, limit1);
  for (double& w : head.w2()) w = uniform(rng, -limit2, limit2);
  return head;
}

bool MlpHead::all_finite() const noexcept {
  return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); });
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(const MlpHead& head, std::span<const double> x) {
  check_dim(head, x.size());
  std::vector<double> pre;
  return hidden_and_logit(head, x.data(), pre);
}

double forward(const MlpHead& head, std::span<const double> x) { return sigmoid(logit(head, x)); }

double bce_loss(double p, double y) noexcept {
  const double q = std::clamp(p, kBceEpsilon, 1.0 - kBceEpsilon);
  return -(y * std::log(q) + (1.0 - y) * std::log1p(-q));
}

double batch_loss(const MlpHead& head, const Batch& batch) {
  check_batch(head, batch);
  std::vector<double> pre;
  double total = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < batch.rows(); ++i) {
    const double w = batch.weights.empty() ? 1.0 : batch.weights[i];
    const double p = sigmoid(hidden_and_logit(head, batch.features.data() + i * batch.dim, pre));
    total += w * bce_loss(p, batch.targets[i]);
    weight_sum += w;
  }
  return total / weight_sum;
}

MlpHead backward(const MlpHead& head, const Batch& batch) {
  check_batch(head, batch);
  const std::size_t d = head.input_dim();
  const std::size_t h = head.hidden_width();
  MlpHead grad(d, h);
  auto g_w1 = grad.w1();
  auto g_b1 = grad.b1();
  auto g_w2 = grad.w2();
  const auto w2 = head.w2();

  double weight_sum = 0.0;
  for (std::size_t i = 0; i < batch.rows(); ++i) weight_sum += batch.weights.empty() ? 1.0 : batch.weights[i];

  std::vector<double> pre;
  for (std::size_t i = 0; i < batch.rows(); ++i) {
    const double* x = batch.features.data() + i * d;
    const double w = batch.weights.empty() ? 1.0 : batch.weights[i];
    const double p = sigmoid(hidden_and_logit(head, x, pre));
    // d(mean loss)/d(logit) for the sigmoid + BCE pair.
    const double g_out = w * (p - batch.targets[i]) / weight_sum;
    grad.b2() += g_out;
    for (std::size_t j = 0; j < h; ++j) {
      if (pre[j] <= 0.0) continue;
      g_w2[j] += g_out * pre[j];
      const double g_pre = g_out * w2[j];
      g_b1[j] += g_pre;
      double* gw = g_w1.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) gw[k] += g_pre * x[k];
    }
  }
  return grad;
}

}  // namespace padkit
