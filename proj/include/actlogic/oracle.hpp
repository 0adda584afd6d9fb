#pragma once

// Exact, exponential-cost information-theoretic references over small label
// sets. Used to check the cheap scores against the quantities they stand in for.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "actlogic/constraints.hpp"
#include "actlogic/random.hpp"

namespace actlogic {

/// Probability mass over complete 0/1 assignments of K labels.
struct JointDistribution {
  std::size_t num_labels = 0;
  std::vector<std::vector<std::uint8_t>> support;
  std::vector<double> mass;

  /// Throws InvalidMarginals when masses are negative, do not sum to 1 within
  /// 1e-12, or (when cs is given) some support element violates cs.
  void validate(const ConstraintSet* cs = nullptr) const;
};

/// One-hot support plus the all-zero vector (listed last) carrying 1 - sum(p).
/// Throws InvalidMarginals if sum(p) > 1 + 1e-9 or any p is negative.
JointDistribution joint_from_me_marginals(std::span<const double> p);

/// P(Y_k = 1) for each label.
std::vector<double> marginals_from_joint(const JointDistribution& j);

/// Uniform-Dirichlet masses over enumerate_valid_assignments(cs).
JointDistribution random_valid_joint(const ConstraintSet& cs, Rng& rng, std::size_t cap = kDefaultEnumerationCap);

/// Shannon entropy in nats of a mass vector, 0 ln 0 = 0.
double entropy(std::span<const double> mass);

/// I(Y_k) = H(Y_k) + H(Y_{-k}) - H(Y), in nats.
double exact_information_gain(const JointDistribution& j, LabelId k);

/// Split of I(Y_k) along the propagation closure y_f = F(y_k):
///
///   entropy     = sum_v P(v) [-ln P(v)]                         (= H(Y_k))
///   constraints = sum_v P(v) [-ln P(y_{f\k})]
///   remainder   = sum_v P(v) sum_{y_{-f}} P(y_{-f} | y_f) [-ln P(y_{-f} | y_{f\k})]
///   constant    = -H(Y)                                  (same for every label)
///
/// entropy + constraints + remainder + constant equals I(Y_k) whenever the
/// support only contains assignments valid under cs.
struct IgDecomposition {
  double entropy = 0.0;
  double constraints = 0.0;
  double remainder = 0.0;
  double constant = 0.0;

  double total() const noexcept { return entropy + constraints + remainder + constant; }
};

inline constexpr std::size_t kDecompositionCap = 8;

/// Throws CapExceeded when K > cap.
IgDecomposition ig_decomposition(const JointDistribution& j, const ConstraintSet& cs, LabelId k,
                                 std::size_t cap = kDecompositionCap);

/// f(x) = (1-x-c) ln(1-x-c) - (1-x) ln(1-x), with 0 ln 0 = 0.
double xlogx_shift(double x, double c);

/// K marginals drawn from a uniform Dirichlet over K + 1 outcomes (the last
/// being "no label"), so they sum to at most 1.
std::vector<double> random_me_marginals(std::size_t k, Rng& rng);

/// True iff ordering by `scores` never contradicts ordering by `reference`:
/// scores[a] > scores[b] implies reference[a] >= reference[b] - tolerance, and
/// equal scores have references within tolerance.
bool rankings_agree(std::span<const double> scores, std::span<const double> reference, double tolerance);

/// Exact information gain of every label under the mutually exclusive joint
/// built from p.
std::vector<double> me_information_gains(std::span<const double> p);

}  // namespace actlogic
