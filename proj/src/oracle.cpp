#include "actlogic/oracle.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "actlogic/errors.hpp"

namespace actlogic {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

using Key = std::vector<std::uint8_t>;

Key without(const std::vector<std::uint8_t>& a, std::size_t k) {
  Key out;
  out.reserve(a.size() - 1);
  for (std::size_t j = 0; j < a.size(); ++j)
    if (j != k) out.push_back(a[j]);
  return out;
}

}  // namespace

void JointDistribution::validate(const ConstraintSet* cs) const {
  if (support.size() != mass.size()) throw InvalidMarginals("support and mass lengths differ");
  double sum = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    if (support[s].size() != num_labels) throw InvalidMarginals("support element has the wrong length");
    if (!(mass[s] >= 0.0)) throw InvalidMarginals("negative mass");
    if (cs && !cs->satisfied_by(support[s])) throw InvalidMarginals("support contains an invalid assignment");
    sum += mass[s];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidMarginals("masses sum to " + std::to_string(sum));
}

JointDistribution joint_from_me_marginals(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidMarginals("marginals must be non-negative");
    sum += v;
  }
  if (sum > 1.0 + 1e-9) throw InvalidMarginals("mutually exclusive marginals sum to " + std::to_string(sum) + " > 1");
  JointDistribution j;
  j.num_labels = p.size();
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::vector<std::uint8_t> one_hot(p.size(), 0);
    one_hot[k] = 1;
    j.support.push_back(std::move(one_hot));
    j.mass.push_back(p[k]);
  }
  j.support.emplace_back(p.size(), 0);
  j.mass.push_back(std::max(0.0, 1.0 - sum));
  return j;
}

std::vector<double> marginals_from_joint(const JointDistribution& j) {
  std::vector<double> p(j.num_labels, 0.0);
  for (std::size_t s = 0; s < j.support.size(); ++s)
    for (std::size_t k = 0; k < j.num_labels; ++k)
      if (j.support[s][k]) p[k] += j.mass[s];
  return p;
}

JointDistribution random_valid_joint(const ConstraintSet& cs, Rng& rng, std::size_t cap) {
  JointDistribution j;
  j.num_labels = cs.num_labels();
  j.support = enumerate_valid_assignments(cs, cap);
  j.mass.resize(j.support.size());
  double sum = 0.0;
  for (auto& m : j.mass) {
    m = standard_exponential(rng);
    sum += m;
  }
  for (auto& m : j.mass) m /= sum;
  return j;
}

double entropy(std::span<const double> mass) {
  double h = 0.0;
  for (double m : mass) h -= xlogx(m);
  return h;
}

double exact_information_gain(const JointDistribution& j, LabelId k) {
  if (k.index >= j.num_labels) throw std::out_of_range("label index out of range");
  double on = 0.0;
  std::map<Key, double> rest;
  for (std::size_t s = 0; s < j.support.size(); ++s) {
    if (j.support[s][k.index]) on += j.mass[s];
    rest[without(j.support[s], k.index)] += j.mass[s];
  }
  const double label_mass[] = {on, 1.0 - on};
  std::vector<double> rest_mass;
  rest_mass.reserve(rest.size());
  for (const auto& [key, m] : rest) rest_mass.push_back(m);
  return entropy(label_mass) + entropy(rest_mass) - entropy(j.mass);
}

IgDecomposition ig_decomposition(const JointDistribution& j, const ConstraintSet& cs, LabelId k, std::size_t cap) {
  const std::size_t n = j.num_labels;
  if (n > cap) throw CapExceeded("decomposition over " + std::to_string(n) + " labels exceeds the cap of " + std::to_string(cap));
  if (cs.num_labels() != n) throw std::invalid_argument("joint and constraint set disagree on the number of labels");

  std::map<Key, double> rest;
  for (std::size_t s = 0; s < j.support.size(); ++s) rest[without(j.support[s], k.index)] += j.mass[s];

  IgDecomposition out;
  out.constant = -entropy(j.mass);
  const PartialAssignment empty(n);
  for (int v = 0; v <= 1; ++v) {
    double p_value = 0.0;
    for (std::size_t s = 0; s < j.support.size(); ++s)
      if (j.support[s][k.index] == v) p_value += j.mass[s];
    if (p_value <= 0.0) continue;

    const auto closure = try_propagate(cs, empty, Literal{k, v == 1});
    if (!closure) continue;  // value impossible under cs, hence zero mass on a valid support

    // P(y_{f\k}): mass of assignments agreeing with the propagated pairs other than k.
    double p_implied = 0.0;
    for (std::size_t s = 0; s < j.support.size(); ++s) {
      bool agrees = true;
      for (const auto& fix : closure->fixes()) {
        if (fix.literal.label == k) continue;
        if ((j.support[s][fix.literal.label.index] == 1) != fix.literal.value) {
          agrees = false;
          break;
        }
      }
      if (agrees) p_implied += j.mass[s];
    }

    out.entropy += -p_value * std::log(p_value);
    out.constraints += -p_value * std::log(p_implied);

    // Given y_k, y_{f\k} is determined, so P(y_{-f} | y_f) = P(a) / P(y_k) and
    // P(y_{-f} | y_{f\k}) = P(a_{-k}) / P(y_{f\k}) for each support element a.
    double inner = 0.0;
    for (std::size_t s = 0; s < j.support.size(); ++s) {
      if (j.support[s][k.index] != v || j.mass[s] <= 0.0) continue;
      const double conditional = j.mass[s] / p_value;
      const double given_implied = rest.at(without(j.support[s], k.index)) / p_implied;
      inner += conditional * -std::log(given_implied);
    }
    out.remainder += p_value * inner;
  }
  return out;
}

double xlogx_shift(double x, double c) { return xlogx(1.0 - x - c) - xlogx(1.0 - x); }

std::vector<double> random_me_marginals(std::size_t k, Rng& rng) {
  std::vector<double> draws(k + 1);
  double sum = 0.0;
  for (auto& d : draws) {
    d = standard_exponential(rng);
    sum += d;
  }
  std::vector<double> p(k);
  for (std::size_t j = 0; j < k; ++j) p[j] = draws[j] / sum;
  return p;
}

bool rankings_agree(std::span<const double> scores, std::span<const double> reference, double tolerance) {
  if (scores.size() != reference.size()) throw std::invalid_argument("rankings_agree: length mismatch");
  for (std::size_t a = 0; a < scores.size(); ++a) {
    for (std::size_t b = 0; b < scores.size(); ++b) {
      if (scores[a] > scores[b] && reference[a] < reference[b] - tolerance) return false;
      if (scores[a] == scores[b] && std::abs(reference[a] - reference[b]) > tolerance) return false;
    }
  }
  return true;
}

std::vector<double> me_information_gains(std::span<const double> p) {
  const auto joint = joint_from_me_marginals(p);
  std::vector<double> gains(p.size());
  for (std::uint32_t k = 0; k < p.size(); ++k) gains[k] = exact_information_gain(joint, LabelId{k});
  return gains;
}

}  // namespace actlogic
