#include "actlogic/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "actlogic/errors.hpp"

namespace actlogic {

SparseVector::SparseVector(std::vector<std::uint32_t> indices, std::vector<double> values) {
  if (indices.size() != values.size()) throw std::invalid_argument("index and value counts differ");
  indices_.reserve(indices.size());
  values_.reserve(values.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (j > 0 && indices[j] <= indices[j - 1])
      throw std::invalid_argument("sparse indices must be strictly increasing");
    if (!std::isfinite(values[j])) throw std::invalid_argument("sparse values must be finite");
    if (values[j] == 0.0) continue;
    indices_.push_back(indices[j]);
    values_.push_back(values[j]);
  }
}

SparseVector SparseVector::from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (const auto& [i, v] : pairs) {
    idx.push_back(i);
    val.push_back(v);
  }
  return SparseVector(std::move(idx), std::move(val));
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t j = 0; j < indices_.size(); ++j) s += values_[j] * dense[indices_[j]];
  return s;
}

void SparseVector::scale_values(std::span<const double> per_feature) {
  for (std::size_t j = 0; j < indices_.size(); ++j) values_[j] *= per_feature[indices_[j]];
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("l2 must be non-negative");
}

LinearModel::LinearModel(std::size_t dimension) : weights_(dimension, 0.0), accumulator_(dimension + 1, 0.0) {}

double LinearModel::decision(const SparseVector& x) const {
  if (x.min_dimension() > weights_.size())
    throw DimensionMismatch("feature index " + std::to_string(x.min_dimension() - 1) + " exceeds model dimension " +
                            std::to_string(weights_.size()));
  return x.dot(weights_) + bias_;
}

void LinearModel::adagrad_step(std::span<const double> gradient, double learning_rate) {
  const std::size_t d = weights_.size();
  for (std::size_t j = 0; j <= d; ++j) {
    const double g = gradient[j];
    if (g == 0.0) continue;
    accumulator_[j] += g * g;
    const double step = learning_rate * g / (std::sqrt(accumulator_[j]) + kAdagradDelta);
    if (j < d)
      weights_[j] -= step;
    else
      bias_ -= step;
  }
  ++steps_;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double predict_proba(const LinearModel& model, const SparseVector& x) {
  return std::clamp(sigmoid(model.decision(x)), kProbabilityClamp, 1.0 - kProbabilityClamp);
}

namespace {

// log(1 + exp(-z)) without overflow.
double softplus_neg(double z) { return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)); }

double example_loss(double z, bool label) { return label ? softplus_neg(z) : softplus_neg(-z); }

void accumulate_gradient(const LinearModel& model, std::span<const Example> batch, double l2, std::vector<double>& grad) {
  const std::size_t d = model.dimension();
  std::fill(grad.begin(), grad.end(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    const double residual = (sigmoid(model.decision(*ex.features)) - (ex.label ? 1.0 : 0.0)) * scale;
    const auto idx = ex.features->indices();
    const auto val = ex.features->values();
    for (std::size_t j = 0; j < idx.size(); ++j) grad[idx[j]] += residual * val[j];
    grad[d] += residual;
  }
  if (l2 > 0.0) {
    const auto w = model.weights();
    for (std::size_t j = 0; j < d; ++j) grad[j] += l2 * w[j];
  }
}

}  // namespace

double logistic_loss(const LinearModel& model, std::span<const Example> data, double l2) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : data) total += example_loss(model.decision(*ex.features), ex.label);
  total /= static_cast<double>(data.size());
  double norm = 0.0;
  for (double w : model.weights()) norm += w * w;
  return total + 0.5 * l2 * norm;
}

std::vector<double> logistic_gradient(const LinearModel& model, std::span<const Example> data, double l2) {
  std::vector<double> grad(model.dimension() + 1, 0.0);
  if (!data.empty()) accumulate_gradient(model, data, l2, grad);
  return grad;
}

std::vector<std::size_t> subsample_negatives(std::span<const std::size_t> positives, std::span<const std::size_t> pool,
                                             Rng& rng) {
  std::vector<std::size_t> out(positives.begin(), positives.end());
  std::vector<std::size_t> candidates(pool.begin(), pool.end());
  const std::size_t take = std::min(positives.size(), candidates.size());
  // Partial Fisher-Yates: the first `take` slots become the sample.
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    out.push_back(candidates[i]);
  }
  return out;
}

LinearModel train(LinearModel model, std::span<const Example> data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) throw std::invalid_argument("training data is empty");
  for (const auto& ex : data)
    if (ex.features->min_dimension() > model.dimension())
      throw DimensionMismatch("training example exceeds model dimension " + std::to_string(model.dimension()));

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Example> batch;
  batch.reserve(cfg.batch_size);
  std::vector<double> grad(model.dimension() + 1);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t b = start; b < stop; ++b) batch.push_back(data[order[b]]);
      accumulate_gradient(model, batch, cfg.l2, grad);
      for (double g : grad)
        if (!std::isfinite(g))
          throw NonFiniteGradient("non-finite gradient at epoch " + std::to_string(epoch) + " (learning rate " +
                                  std::to_string(cfg.learning_rate) + " too large?)");
      model.adagrad_step(grad, cfg.learning_rate);
    }
  }
  const double loss = logistic_loss(model, data, cfg.l2);
  if (!std::isfinite(loss)) throw NonFiniteGradient("training loss diverged");
  return model;
}

}  // namespace actlogic
