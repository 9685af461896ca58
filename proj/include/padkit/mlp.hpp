#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace padkit {

/// Two-layer classifier head: p = sigmoid(w2 . relu(W1 x + b1) + b2).
///
/// All parameters live in one contiguous buffer laid out as
/// [W1 (hidden x input, row-major) | b1 (hidden) | w2 (hidden) | b2 (1)],
/// which lets optimizers and gradient checks treat them as one vector.
/// The same type carries gradients, since they share every shape.
class MlpHead {
 public:
  MlpHead() = default;
  /// All-zero parameters.
  MlpHead(std::size_t input_dim, std::size_t hidden_width);

  /// He-style uniform fan-in initialization: W1 ~ U(+-sqrt(6/d)), w2 ~ U(+-sqrt(6/h)), biases zero.
  static MlpHead he_uniform(std::size_t input_dim, std::size_t hidden_width, std::mt19937_64& rng);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t hidden_width() const noexcept { return hidden_width_; }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  std::span<double> w1() noexcept { return {params_.data(), hidden_width_ * input_dim_}; }
  std::span<double> b1() noexcept { return {params_.data() + b1_offset(), hidden_width_}; }
  std::span<double> w2() noexcept { return {params_.data() + w2_offset(), hidden_width_}; }
  double& b2() noexcept { return params_.back(); }
  std::span<const double> w1() const noexcept { return {params_.data(), hidden_width_ * input_dim_}; }
  std::span<const double> b1() const noexcept { return {params_.data() + b1_offset(), hidden_width_}; }
  std::span<const double> w2() const noexcept { return {params_.data() + w2_offset(), hidden_width_}; }
  double b2() const noexcept { return params_.back(); }

  bool all_finite() const noexcept;

  friend bool operator==(const MlpHead&, const MlpHead&) = default;

 private:
  std::size_t b1_offset() const noexcept { return hidden_width_ * input_dim_; }
  std::size_t w2_offset() const noexcept { return b1_offset() + hidden_width_; }

  std::size_t input_dim_ = 0;
  std::size_t hidden_width_ = 0;
  std::vector<double> params_;
};

/// Numerically stable logistic function.
double sigmoid(double z) noexcept;

/// Pre-sigmoid output. Throws DimMismatch when x.size() != input_dim.
double logit(const MlpHead& head, std::span<const double> x);

/// Attack probability in [0,1]. Throws DimMismatch.
double forward(const MlpHead& head, std::span<const double> x);

inline constexpr double kBceEpsilon = 1e-12;

/// Binary cross-entropy with p clamped to [1e-12, 1 - 1e-12]; y is 0 or 1.
double bce_loss(double p, double y) noexcept;

/// Row-major features with one target (0 bona fide, 1 attack) per row and
/// optional per-row weights (empty means all ones).
struct Batch {
  std::size_t dim = 0;
  std::span<const double> features;
  std::span<const double> targets;
  std::span<const double> weights;

  std::size_t rows() const noexcept { return targets.size(); }
};

/// Weighted mean BCE over the batch: sum(w_i * loss_i) / sum(w_i).
double batch_loss(const MlpHead& head, const Batch& batch);

/// Gradient of batch_loss with respect to every parameter, in MlpHead layout.
/// The ReLU subgradient at zero is zero. Throws DimMismatch or DegenerateData
/// on an empty batch.
MlpHead backward(const MlpHead& head, const Batch& batch);

}  // namespace padkit
