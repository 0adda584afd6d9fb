#pragma once

// Per-label binary logistic regression trained with mini-batch AdaGrad.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "actlogic/random.hpp"

namespace actlogic {

/// Sparse feature vector with strictly increasing indices and no explicit zeros.
class SparseVector {
 public:
  SparseVector() = default;
  /// Drops zero values; throws std::invalid_argument on unsorted or duplicate
  /// indices or non-finite values.
  SparseVector(std::vector<std::uint32_t> indices, std::vector<double> values);
  static SparseVector from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs);

  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t nnz() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  /// One past the largest index, 0 when empty.
  std::size_t min_dimension() const noexcept { return indices_.empty() ? 0 : indices_.back() + 1; }

  double dot(std::span<const double> dense) const;
  void scale_values(std::span<const double> per_feature);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

struct TrainConfig {
  std::size_t batch_size = 100;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

inline constexpr double kAdagradDelta = 1e-8;
inline constexpr double kProbabilityClamp = 1e-9;

/// Weights, bias, and AdaGrad state of one binary classifier. The
/// accumulator has dimension + 1 entries; the last belongs to the bias.
class LinearModel {
 public:
  LinearModel() = default;
  explicit LinearModel(std::size_t dimension);

  std::size_t dimension() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<double> weights() noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  void set_bias(double b) noexcept { bias_ = b; }
  std::span<const double> accumulator() const noexcept { return accumulator_; }
  std::span<double> accumulator() noexcept { return accumulator_; }
  std::uint64_t steps_taken() const noexcept { return steps_; }
  void set_steps_taken(std::uint64_t s) noexcept { steps_ = s; }

  /// w . x + b. Throws DimensionMismatch when x has an index >= dimension.
  double decision(const SparseVector& x) const;

  /// Applies one AdaGrad update with the given full gradient (dimension + 1).
  void adagrad_step(std::span<const double> gradient, double learning_rate);

  friend bool operator==(const LinearModel&, const LinearModel&) = default;

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> accumulator_;
  std::uint64_t steps_ = 0;
};

double sigmoid(double z);

/// sigmoid(w . x + b) clamped to [1e-9, 1 - 1e-9].
double predict_proba(const LinearModel& model, const SparseVector& x);

struct Example {
  const SparseVector* features = nullptr;
  bool label = false;
};

/// Mean logistic loss over the examples plus (l2 / 2) ||w||^2 (bias unregularized).
double logistic_loss(const LinearModel& model, std::span<const Example> data, double l2);

/// Gradient of logistic_loss, dimension + 1 entries with the bias last.
std::vector<double> logistic_gradient(const LinearModel& model, std::span<const Example> data, double l2);

/// All positives followed by min(|positives|, |pool|) negatives drawn from the
/// pool without replacement.
std::vector<std::size_t> subsample_negatives(std::span<const std::size_t> positives, std::span<const std::size_t> pool,
                                             Rng& rng);

/// Runs epochs x ceil(n / batch_size) AdaGrad steps on the regularized
/// logistic loss, shuffling once per epoch from cfg.seed. Starts from
/// `model`'s weights and accumulator (warm start); pass LinearModel(dim) for a
/// cold start. Throws NonFiniteGradient when the loss diverges.
LinearModel train(LinearModel model, std::span<const Example> data, const TrainConfig& cfg);

}  // namespace actlogic
