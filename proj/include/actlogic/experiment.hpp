#pragma once

// The pool-based active-learning loop: initial per-label training, sequential
// request-and-propagate selection, warm retraining, and evaluation on the
// combined dataset.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "actlogic/constraints.hpp"
#include "actlogic/data.hpp"
#include "actlogic/learner.hpp"
#include "actlogic/scoring.hpp"

namespace actlogic {

struct ExperimentConfig {
  ScoringMethod method = ScoringMethod::parse("probability-cp");
  /// Explicit requests per iteration (propagated fixes are free).
  std::size_t per_iteration = 100;
  std::size_t max_iterations = 1000;
  double target_auc = 0.999;
  /// Stop at the first iteration reaching target_auc; otherwise continue until
  /// the pool empties or max_iterations.
  bool stop_at_target = true;
  TrainConfig train;
  SplitSpec split;
  std::uint64_t seed = 0;

  void validate() const;
};

struct IterationMetrics {
  std::size_t iteration = 0;
  double average_auc = 0.0;
  /// Cumulative explicit requests.
  std::size_t labels_requested = 0;
  /// Cumulative fixed pairs (requested plus propagated).
  std::size_t labels_fixed = 0;
  std::int64_t wall_ms = 0;

  friend bool operator==(const IterationMetrics&, const IterationMetrics&) = default;
};

enum class StopReason { TargetReached, PoolExhausted, MaxIterations };

struct RunResult {
  std::vector<IterationMetrics> iterations;
  std::optional<std::size_t> iterations_to_target;
  StopReason stop = StopReason::MaxIterations;
};

struct InstanceFix {
  std::size_t instance = 0;
  Fix fix;

  friend bool operator==(const InstanceFix&, const InstanceFix&) = default;
};

struct BatchResult {
  std::vector<InstanceFix> fixes;
  std::size_t requested = 0;
  /// Fewer than M requests were possible.
  bool exhausted = false;
};

/// Ground-truth value of a (instance, label) pair.
using RevealFn = std::function<bool(std::size_t instance, LabelId label)>;

/// Up to M sequential rounds of select_next -> reveal -> (for -cp methods)
/// propagate within the instance. Every pair fixed in a round becomes
/// ineligible in `pool` and is recorded in `fixed`. Scores are recomputed
/// only for the instance touched by the previous round. Revealed truth that
/// contradicts the constraints raises ConstraintViolation.
BatchResult select_batch(MarginalMatrix& pool, const ConstraintSet& cs, const ScoringMethod& method, std::size_t M,
                         std::span<PartialAssignment> fixed, const RevealFn& reveal, Rng& rng);

/// Mann-Whitney ROC-AUC with ties counted as one half; nullopt when the
/// labels contain no positives or no negatives.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Per-label AUC over an N x K row-major score matrix, averaged with weights
/// equal to each label's positive count. Labels lacking positives or
/// negatives are skipped; throws Degenerate when all are.
double weighted_average_auc(std::span<const double> scores, const Dataset& d);

/// weighted_average_auc where fixed pairs score their fixed value and the
/// rest score predict_proba.
double average_auc(std::span<const LinearModel> models, std::span<const PartialAssignment> fixed, const Dataset& d);

/// Throws ConfigError for invalid configs, ConstraintViolation when the truth
/// contradicts cs, and NonFiniteGradient when training diverges.
RunResult run_experiment(const Dataset& d, const ConstraintSet& cs, const ExperimentConfig& cfg,
                         std::vector<LinearModel>* final_models = nullptr);

}  // namespace actlogic
