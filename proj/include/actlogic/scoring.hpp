#pragma once

// Acquisition scores for (label, instance) pairs and the argmax selection
// rule used by every active-learning method in the catalog.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actlogic/constraints.hpp"
#include "actlogic/random.hpp"

namespace actlogic {

/// N x K matrix of marginals p_k^i plus an eligibility mask.
class MarginalMatrix {
 public:
  MarginalMatrix() = default;
  /// All probabilities 0.5, every pair eligible.
  MarginalMatrix(std::size_t num_instances, std::size_t num_labels);
  /// Row-major values; throws InvalidMarginals when a value is outside [0, 1].
  MarginalMatrix(std::size_t num_instances, std::size_t num_labels, std::vector<double> values);

  std::size_t num_instances() const noexcept { return n_; }
  std::size_t num_labels() const noexcept { return k_; }

  double at(std::size_t instance, LabelId label) const { return values_[instance * k_ + label.index]; }
  void set(std::size_t instance, LabelId label, double p);
  std::span<const double> row(std::size_t instance) const { return {values_.data() + instance * k_, k_}; }

  bool eligible(std::size_t instance, LabelId label) const { return mask_[instance * k_ + label.index] != 0; }
  void set_eligible(std::size_t instance, LabelId label, bool eligible);
  void set_row_eligible(std::size_t instance, bool eligible);
  std::size_t eligible_count() const noexcept;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

enum class SurpriseKind { Logarithmic, Linear };

inline constexpr double kSurpriseEpsilon = 1e-12;

/// Logarithmic: -ln(max(p, 1e-12)). Linear: 1 - p. Both vanish at p = 1.
double surprise(SurpriseKind kind, double p);

/// -p ln p - (1-p) ln(1-p), with 0 ln 0 = 0.
double binary_entropy(double p);

enum class ScoreKind { Random, Entropy, Probability, MutualExclusionSurprise, ConstraintSurprise };

/// A scoring function plus whether revealed labels are propagated through
/// the constraints (the "-cp" methods).
struct ScoringMethod {
  ScoreKind kind = ScoreKind::Entropy;
  SurpriseKind surprise = SurpriseKind::Logarithmic;
  bool propagate_constraints = false;

  /// Accepts the seven catalog names; throws ConfigError listing them otherwise.
  static ScoringMethod parse(std::string_view name);
  std::string name() const;

  /// Throws ConfigError when the method cannot be used with `cs`.
  void validate(const ConstraintSet& cs) const;

  friend bool operator==(const ScoringMethod&, const ScoringMethod&) = default;
};

inline constexpr std::array<std::string_view, 7> kMethodNames = {
    "random", "entropy", "random-cp", "entropy-cp", "probability-cp", "log-cp", "linear-cp"};

std::string method_names_list();

double score_entropy(const MarginalMatrix& m, LabelId k, std::size_t i);
double score_probability(const MarginalMatrix& m, LabelId k, std::size_t i);

/// Mutual-exclusion surprise score:
///   p_k [S(p_k) + sum_{c != k} S(1 - p_c)] + (1 - p_k) S(1 - p_k)
/// Group members fixed in `fixed` (when given) add no surprise.
double score_me(const MarginalMatrix& m, SurpriseKind kind, LabelId k, std::size_t i,
                std::span<const LabelId> me_group, const PartialAssignment* fixed = nullptr);

/// General-constraint surprise score:
///   p_k sum_{(c,v) in F(k=1)} S(c,v) + (1 - p_k) sum_{(c,v) in F(k=0)} S(c,v)
/// with S(c,1) = S(p_c), S(c,0) = S(1 - p_c) and F propagation against
/// `fixed`. Pairs already in `fixed` add nothing. Throws Inconsistency.
double score_constraints(const MarginalMatrix& m, const ConstraintSet& cs, SurpriseKind kind, LabelId k,
                         std::size_t i, const PartialAssignment& fixed);

struct Selection {
  LabelId label;
  std::size_t instance = 0;
  double score = 0.0;

  friend bool operator==(const Selection&, const Selection&) = default;
};

/// Scores one instance's eligible labels into `out` (size K). Ineligible
/// entries are left untouched. Random draws are not produced here.
void score_instance(const MarginalMatrix& m, const ConstraintSet& cs, const ScoringMethod& method, std::size_t i,
                    const PartialAssignment& fixed, std::span<double> out);

/// Argmax of the method's score over eligible pairs; ties go to the lowest
/// (instance, label). Random draws one uniform score per eligible pair in
/// (instance, label) order. `fixed` holds one assignment per instance.
/// Throws PoolExhausted when nothing is eligible.
Selection select_next(const MarginalMatrix& m, const ConstraintSet& cs, const ScoringMethod& method,
                      std::span<const PartialAssignment> fixed, Rng& rng);

}  // namespace actlogic
