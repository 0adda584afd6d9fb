#include "actlogic/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "actlogic/errors.hpp"
#include "actlogic/parallel.hpp"

namespace actlogic {

namespace {

// Substream tags.
constexpr std::uint64_t kSelectStream = 1;
constexpr std::uint64_t kSubsampleStream = 2;
constexpr std::uint64_t kTrainStream = 3;

bool score_depends_on_fixed(const ScoringMethod& method) {
  return method.kind == ScoreKind::MutualExclusionSurprise || method.kind == ScoreKind::ConstraintSurprise;
}

struct RowBest {
  double score = -std::numeric_limits<double>::infinity();
  std::uint32_t label = 0;
  bool any = false;
};

RowBest best_in_row(const MarginalMatrix& pool, std::size_t i, std::span<const double> row) {
  RowBest best;
  for (std::uint32_t k = 0; k < row.size(); ++k) {
    if (!pool.eligible(i, LabelId{k})) continue;
    if (!best.any || row[k] > best.score) best = RowBest{row[k], k, true};
  }
  return best;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (per_iteration < 1) throw ConfigError("per_iteration must be at least 1");
  if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (!(target_auc > 0.0 && target_auc <= 1.0)) throw ConfigError("target_auc must be in (0, 1]");
  train.validate();
}

BatchResult select_batch(MarginalMatrix& pool, const ConstraintSet& cs, const ScoringMethod& method, std::size_t M,
                         std::span<PartialAssignment> fixed, const RevealFn& reveal, Rng& rng) {
  const std::size_t n = pool.num_instances();
  const std::size_t k_count = pool.num_labels();
  if (fixed.size() != n) throw std::invalid_argument("select_batch needs one fixed assignment per instance");
  method.validate(cs);

  const bool random = method.kind == ScoreKind::Random;
  std::vector<double> scores(n * k_count, 0.0);
  std::vector<RowBest> best(n);
  const auto rescore = [&](std::size_t i) {
    std::span<double> row(scores.data() + i * k_count, k_count);
    try {
      score_instance(pool, cs, method, i, fixed[i], row);
    } catch (const Inconsistency& e) {
      throw Inconsistency("instance " + std::to_string(i) + ": " + e.what());
    }
    best[i] = best_in_row(pool, i, row);
  };
  if (!random)
    for (std::size_t i = 0; i < n; ++i) rescore(i);

  BatchResult result;
  for (std::size_t round = 0; round < M; ++round) {
    std::optional<Selection> pick;
    if (random) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t k = 0; k < k_count; ++k) {
          if (!pool.eligible(i, LabelId{k})) continue;
          const double s = uniform01(rng);
          if (!pick || s > pick->score) pick = Selection{LabelId{k}, i, s};
        }
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!best[i].any) continue;
        if (!pick || best[i].score > pick->score) pick = Selection{LabelId{best[i].label}, i, best[i].score};
      }
    }
    if (!pick) {
      result.exhausted = true;
      break;
    }

    const std::size_t i = pick->instance;
    const Literal revealed{pick->label, reveal(i, pick->label)};
    ++result.requested;
    if (method.propagate_constraints) {
      PartialAssignment closure;
      try {
        closure = propagate(cs, fixed[i], revealed);
      } catch (const Inconsistency& e) {
        throw ConstraintViolation("instance " + std::to_string(i) + ": revealed labels violate the constraints: " +
                                  e.what());
      }
      for (const auto& f : closure.fixes()) {
        if (fixed[i].is_fixed(f.literal.label)) continue;
        result.fixes.push_back(InstanceFix{i, f});
        pool.set_eligible(i, f.literal.label, false);
      }
      fixed[i] = std::move(closure);
    } else {
      fixed[i].fix(revealed, Origin::Requested);
      result.fixes.push_back(InstanceFix{i, Fix{revealed, Origin::Requested}});
      pool.set_eligible(i, revealed.label, false);
    }

    if (!random) {
      if (score_depends_on_fixed(method)) {
        rescore(i);
      } else {
        best[i] = best_in_row(pool, i, std::span<const double>(scores.data() + i * k_count, k_count));
      }
    }
  }
  if (result.requested < M) result.exhausted = true;
  return result;
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positives = 0.0;
  double negatives = 0.0;
  double u = 0.0;  // pairs where the positive outranks the negative, ties counted 1/2
  for (std::size_t start = 0; start < order.size();) {
    std::size_t stop = start;
    double group_pos = 0.0;
    double group_neg = 0.0;
    while (stop < order.size() && scores[order[stop]] == scores[order[start]]) {
      (labels[order[stop]] ? group_pos : group_neg) += 1.0;
      ++stop;
    }
    u += group_pos * negatives + 0.5 * group_pos * group_neg;
    positives += group_pos;
    negatives += group_neg;
    start = stop;
  }
  if (positives == 0.0 || negatives == 0.0) return std::nullopt;
  return u / (positives * negatives);
}

double weighted_average_auc(std::span<const double> scores, const Dataset& d) {
  const std::size_t n = d.num_instances();
  const std::size_t k_count = d.num_labels();
  if (scores.size() != n * k_count) throw std::invalid_argument("score matrix has the wrong size");
  std::vector<double> column(n);
  std::vector<std::uint8_t> truth(n);
  double weighted = 0.0;
  double weight = 0.0;
  for (std::uint32_t k = 0; k < k_count; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = scores[i * k_count + k];
      truth[i] = d.label(i, LabelId{k}) ? 1 : 0;
    }
    const auto auc = roc_auc(column, truth);
    if (!auc) continue;
    const auto positives = static_cast<double>(std::count(truth.begin(), truth.end(), std::uint8_t{1}));
    weighted += positives * *auc;
    weight += positives;
  }
  if (weight == 0.0) throw Degenerate("every label lacks positives or negatives; AUC is undefined");
  return weighted / weight;
}

namespace {

std::vector<double> predict_all(std::span<const LinearModel> models, const Dataset& d) {
  const std::size_t n = d.num_instances();
  const std::size_t k_count = d.num_labels();
  std::vector<double> out(n * k_count);
  parallel_for(k_count, [&](std::size_t k) {
    for (std::size_t i = 0; i < n; ++i) out[i * k_count + k] = predict_proba(models[k], d.instances[i]);
  });
  return out;
}

std::vector<double> override_fixed(std::vector<double> scores, std::span<const PartialAssignment> fixed) {
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    const std::size_t k_count = fixed[i].num_labels();
    for (std::uint32_t k = 0; k < k_count; ++k)
      if (const auto v = fixed[i].value(LabelId{k})) scores[i * k_count + k] = *v ? 1.0 : 0.0;
  }
  return scores;
}

void train_all(std::vector<LinearModel>& models, std::span<const PartialAssignment> fixed, const Dataset& d,
               const ExperimentConfig& cfg, std::size_t iteration) {
  parallel_for(models.size(), [&](std::size_t k) {
    const LabelId id{static_cast<std::uint32_t>(k)};
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      if (const auto v = fixed[i].value(id)) (*v ? positives : negatives).push_back(i);
    }
    if (positives.empty()) return;
    Rng rng(substream_seed(cfg.seed, kSubsampleStream, iteration, k));
    const auto rows = subsample_negatives(positives, negatives, rng);
    std::vector<Example> examples;
    examples.reserve(rows.size());
    for (auto r : rows) examples.push_back(Example{&d.instances[r], *fixed[r].value(id)});
    TrainConfig tc = cfg.train;
    tc.seed = substream_seed(cfg.seed ^ cfg.train.seed, kTrainStream, iteration, k);
    try {
      models[k] = train(std::move(models[k]), examples, tc);
    } catch (const NonFiniteGradient& e) {
      throw NonFiniteGradient("label '" + d.label_names[k] + "', iteration " + std::to_string(iteration) + ": " +
                              e.what());
    }
  });
}

}  // namespace

double average_auc(std::span<const LinearModel> models, std::span<const PartialAssignment> fixed, const Dataset& d) {
  if (models.size() != d.num_labels() || fixed.size() != d.num_instances())
    throw std::invalid_argument("average_auc needs one model per label and one assignment per instance");
  return weighted_average_auc(override_fixed(predict_all(models, d), fixed), d);
}

RunResult run_experiment(const Dataset& d, const ConstraintSet& cs, const ExperimentConfig& cfg,
                         std::vector<LinearModel>* final_models) {
  cfg.validate();
  d.validate();
  cfg.method.validate(cs);
  validate_truth(d, cs);
  if (d.label_names != cs.label_names()) throw ConfigError("dataset labels are not in constraint-set order");

  const std::size_t n = d.num_instances();
  const std::size_t k_count = d.num_labels();
  const auto parts = split_indices(n, cfg.split);

  std::vector<PartialAssignment> fixed(n, PartialAssignment(k_count));
  for (auto i : parts.train)
    for (std::uint32_t k = 0; k < k_count; ++k) fixed[i].fix(Literal{LabelId{k}, d.label(i, LabelId{k})}, Origin::Requested);

  std::vector<LinearModel> models(k_count, LinearModel(d.feature_dim));
  train_all(models, fixed, d, cfg, 0);
  auto predictions = predict_all(models, d);

  MarginalMatrix pool(n, k_count, predictions);
  for (std::size_t i = 0; i < n; ++i) pool.set_row_eligible(i, false);
  for (auto i : parts.test) pool.set_row_eligible(i, true);

  const RevealFn reveal = [&](std::size_t i, LabelId k) { return d.label(i, k); };

  RunResult result;
  std::size_t requested = 0;
  std::size_t fixed_count = 0;
  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    if (pool.eligible_count() == 0) {
      result.stop = StopReason::PoolExhausted;
      break;
    }
    const auto start = std::chrono::steady_clock::now();
    Rng rng(substream_seed(cfg.seed, kSelectStream, t));
    const auto batch = select_batch(pool, cs, cfg.method, cfg.per_iteration, fixed, reveal, rng);
    requested += batch.requested;
    fixed_count += batch.fixes.size();

    train_all(models, fixed, d, cfg, t);
    predictions = predict_all(models, d);
    const double auc = weighted_average_auc(override_fixed(predictions, fixed), d);
    const auto elapsed = std::chrono::steady_clock::now() - start;

    result.iterations.push_back(IterationMetrics{
        t, auc, requested, fixed_count, std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()});

    if (auc >= cfg.target_auc && !result.iterations_to_target) {
      result.iterations_to_target = t;
      if (cfg.stop_at_target) {
        result.stop = StopReason::TargetReached;
        break;
      }
    }
    if (pool.eligible_count() == 0) {
      result.stop = StopReason::PoolExhausted;
      break;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::uint32_t k = 0; k < k_count; ++k) pool.set(i, LabelId{k}, predictions[i * k_count + k]);
  }
  if (final_models) *final_models = std::move(models);
  return result;
}

}  // namespace actlogic
