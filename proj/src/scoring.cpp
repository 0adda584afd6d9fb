#include "actlogic/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "actlogic/errors.hpp"

namespace actlogic {

MarginalMatrix::MarginalMatrix(std::size_t num_instances, std::size_t num_labels)
    : n_(num_instances), k_(num_labels), values_(n_ * k_, 0.5), mask_(n_ * k_, 1) {}

MarginalMatrix::MarginalMatrix(std::size_t num_instances, std::size_t num_labels, std::vector<double> values)
    : n_(num_instances), k_(num_labels), values_(std::move(values)), mask_(n_ * k_, 1) {
  if (values_.size() != n_ * k_)
    throw InvalidMarginals("expected " + std::to_string(n_ * k_) + " marginals, got " + std::to_string(values_.size()));
  for (double p : values_)
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidMarginals("marginal " + std::to_string(p) + " is outside [0, 1]");
}

void MarginalMatrix::set(std::size_t instance, LabelId label, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidMarginals("marginal " + std::to_string(p) + " is outside [0, 1]");
  values_.at(instance * k_ + label.index) = p;
}

void MarginalMatrix::set_eligible(std::size_t instance, LabelId label, bool eligible) {
  mask_.at(instance * k_ + label.index) = eligible ? 1 : 0;
}

void MarginalMatrix::set_row_eligible(std::size_t instance, bool eligible) {
  std::fill_n(mask_.begin() + static_cast<std::ptrdiff_t>(instance * k_), k_, eligible ? 1 : 0);
}

std::size_t MarginalMatrix::eligible_count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

double surprise(SurpriseKind kind, double p) {
  switch (kind) {
    case SurpriseKind::Logarithmic:
      return p >= 1.0 ? 0.0 : -std::log(std::max(p, kSurpriseEpsilon));
    case SurpriseKind::Linear:
      return 1.0 - p;
  }
  return 0.0;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

ScoringMethod ScoringMethod::parse(std::string_view name) {
  if (name == "random") return {ScoreKind::Random, SurpriseKind::Logarithmic, false};
  if (name == "entropy") return {ScoreKind::Entropy, SurpriseKind::Logarithmic, false};
  if (name == "random-cp") return {ScoreKind::Random, SurpriseKind::Logarithmic, true};
  if (name == "entropy-cp") return {ScoreKind::Entropy, SurpriseKind::Logarithmic, true};
  if (name == "probability-cp") return {ScoreKind::Probability, SurpriseKind::Logarithmic, true};
  if (name == "log-cp") return {ScoreKind::ConstraintSurprise, SurpriseKind::Logarithmic, true};
  if (name == "linear-cp") return {ScoreKind::ConstraintSurprise, SurpriseKind::Linear, true};
  // Library-level variants scoring with the closed-form single-group formula.
  if (name == "me-log-cp") return {ScoreKind::MutualExclusionSurprise, SurpriseKind::Logarithmic, true};
  if (name == "me-linear-cp") return {ScoreKind::MutualExclusionSurprise, SurpriseKind::Linear, true};
  throw ConfigError("unknown method '" + std::string(name) + "'; valid methods: " + method_names_list());
}

std::string ScoringMethod::name() const {
  const std::string cp = propagate_constraints ? "-cp" : "";
  const std::string kind_name = surprise == SurpriseKind::Logarithmic ? "log" : "linear";
  switch (kind) {
    case ScoreKind::Random:
      return "random" + cp;
    case ScoreKind::Entropy:
      return "entropy" + cp;
    case ScoreKind::Probability:
      return "probability" + cp;
    case ScoreKind::MutualExclusionSurprise:
      return "me-" + kind_name + cp;
    case ScoreKind::ConstraintSurprise:
      return kind_name + cp;
  }
  return "unknown";
}

void ScoringMethod::validate(const ConstraintSet& cs) const {
  if ((kind == ScoreKind::Probability || kind == ScoreKind::ConstraintSurprise) && !propagate_constraints)
    throw ConfigError("method " + name() + " requires constraint propagation");
  if (kind == ScoreKind::MutualExclusionSurprise && cs.sole_mutual_exclusion() == nullptr)
    throw ConfigError("mutual-exclusion surprise needs a constraint set made of a single mutual-exclusion group");
}

std::string method_names_list() {
  std::string out;
  for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
    if (i) out += ", ";
    out += kMethodNames[i];
  }
  return out;
}

double score_entropy(const MarginalMatrix& m, LabelId k, std::size_t i) { return binary_entropy(m.at(i, k)); }

double score_probability(const MarginalMatrix& m, LabelId k, std::size_t i) { return m.at(i, k); }

double score_me(const MarginalMatrix& m, SurpriseKind kind, LabelId k, std::size_t i,
                std::span<const LabelId> me_group, const PartialAssignment* fixed) {
  const double pk = m.at(i, k);
  std::vector<LabelId> members(me_group.begin(), me_group.end());
  std::sort(members.begin(), members.end());
  double positive = surprise(kind, pk);
  for (auto c : members) {
    if (c == k) continue;
    if (fixed && fixed->is_fixed(c)) continue;
    positive += surprise(kind, 1.0 - m.at(i, c));
  }
  const double negative = surprise(kind, 1.0 - pk);
  return pk * positive + (1.0 - pk) * negative;
}

namespace {

// Surprise of the pairs `closure` adds beyond `seed`, self pair first and the
// rest in ascending label order.
double closure_surprise(const MarginalMatrix& m, SurpriseKind kind, std::size_t i, LabelId k, bool value,
                        const PartialAssignment& seed, const PartialAssignment& closure) {
  const double pk = m.at(i, k);
  double total = surprise(kind, value ? pk : 1.0 - pk);
  for (std::uint32_t c = 0; c < closure.num_labels(); ++c) {
    const LabelId id{c};
    if (id == k || seed.is_fixed(id)) continue;
    const auto v = closure.value(id);
    if (!v) continue;
    const double pc = m.at(i, id);
    total += surprise(kind, *v ? pc : 1.0 - pc);
  }
  return total;
}

}  // namespace

double score_constraints(const MarginalMatrix& m, const ConstraintSet& cs, SurpriseKind kind, LabelId k,
                         std::size_t i, const PartialAssignment& fixed) {
  const double pk = m.at(i, k);
  const auto if_positive = propagate(cs, fixed, Literal{k, true});
  const auto if_negative = propagate(cs, fixed, Literal{k, false});
  const double positive = closure_surprise(m, kind, i, k, true, fixed, if_positive);
  const double negative = closure_surprise(m, kind, i, k, false, fixed, if_negative);
  return pk * positive + (1.0 - pk) * negative;
}

void score_instance(const MarginalMatrix& m, const ConstraintSet& cs, const ScoringMethod& method, std::size_t i,
                    const PartialAssignment& fixed, std::span<double> out) {
  const std::size_t k_count = m.num_labels();
  const MutualExclusion* group = method.kind == ScoreKind::MutualExclusionSurprise ? cs.sole_mutual_exclusion() : nullptr;
  for (std::uint32_t k = 0; k < k_count; ++k) {
    const LabelId id{k};
    if (!m.eligible(i, id)) continue;
    switch (method.kind) {
      case ScoreKind::Random:
        out[k] = 0.0;
        break;
      case ScoreKind::Entropy:
        out[k] = score_entropy(m, id, i);
        break;
      case ScoreKind::Probability:
        out[k] = score_probability(m, id, i);
        break;
      case ScoreKind::MutualExclusionSurprise: {
        if (group == nullptr)
          throw ConfigError("mutual-exclusion surprise needs a single mutual-exclusion group");
        const bool member = std::find(group->members.begin(), group->members.end(), id) != group->members.end();
        const LabelId self[] = {id};
        out[k] = member ? score_me(m, method.surprise, id, i, group->members, &fixed)
                        : score_me(m, method.surprise, id, i, self, &fixed);
        break;
      }
      case ScoreKind::ConstraintSurprise:
        out[k] = score_constraints(m, cs, method.surprise, id, i, fixed);
        break;
    }
  }
}

Selection select_next(const MarginalMatrix& m, const ConstraintSet& cs, const ScoringMethod& method,
                      std::span<const PartialAssignment> fixed, Rng& rng) {
  if (fixed.size() != m.num_instances())
    throw std::invalid_argument("select_next needs one fixed assignment per instance");
  const std::size_t k_count = m.num_labels();
  std::vector<double> row(k_count);
  bool found = false;
  Selection best;
  best.score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.num_instances(); ++i) {
    if (method.kind != ScoreKind::Random) score_instance(m, cs, method, i, fixed[i], row);
    for (std::uint32_t k = 0; k < k_count; ++k) {
      const LabelId id{k};
      if (!m.eligible(i, id)) continue;
      const double s = method.kind == ScoreKind::Random ? uniform01(rng) : row[k];
      if (!found || s > best.score) {
        best = Selection{id, i, s};
        found = true;
      }
    }
  }
  if (!found) throw PoolExhausted("no eligible (label, instance) pair remains");
  return best;
}

}  // namespace actlogic
