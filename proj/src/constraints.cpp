#include "actlogic/constraints.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "actlogic/errors.hpp"

namespace actlogic {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_acyclic(const std::vector<std::string>& names, const std::vector<Constraint>& constraints) {
  const std::size_t k = names.size();
  std::vector<std::vector<std::uint32_t>> children(k);
  std::vector<std::size_t> indegree(k, 0);
  for (const auto& c : constraints) {
    if (const auto* s = std::get_if<Subsumption>(&c)) {
      children[s->parent.index].push_back(s->child.index);
      ++indegree[s->child.index];
    }
  }
  std::vector<std::uint32_t> ready;
  for (std::uint32_t i = 0; i < k; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t visited = 0;
  while (!ready.empty()) {
    const auto node = ready.back();
    ready.pop_back();
    ++visited;
    for (auto child : children[node])
      if (--indegree[child] == 0) ready.push_back(child);
  }
  if (visited != k) {
    for (std::uint32_t i = 0; i < k; ++i) {
      if (indegree[i] > 0) throw ConfigError("subsumption edges form a cycle through label '" + names[i] + "'");
    }
  }
}

}  // namespace

ConstraintSet::ConstraintSet(std::vector<std::string> label_names, std::vector<Constraint> constraints)
    : names_(std::move(label_names)), constraints_(std::move(constraints)) {
  if (names_.empty()) throw ConfigError("constraint set has no labels");
  for (std::uint32_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw ConfigError("label " + std::to_string(i) + " has an empty name");
    if (!by_name_.emplace(names_[i], LabelId{i}).second)
      throw ConfigError("duplicate label name '" + names_[i] + "'");
  }
  const auto check_id = [&](LabelId id) {
    if (id.index >= names_.size())
      throw ConfigError("constraint references unknown label index " + std::to_string(id.index));
  };
  for (const auto& c : constraints_) {
    std::visit(Overloaded{
                   [&](const MutualExclusion& me) {
                     if (me.members.size() < 2)
                       throw ConfigError("mutual exclusion group needs at least two labels");
                     for (auto m : me.members) check_id(m);
                     auto sorted = me.members;
                     std::sort(sorted.begin(), sorted.end());
                     if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                       throw ConfigError("mutual exclusion group lists a label twice");
                   },
                   [&](const Subsumption& s) {
                     check_id(s.parent);
                     check_id(s.child);
                     if (s.parent == s.child)
                       throw ConfigError("subsumption edge on '" + names_[s.parent.index] + "' is a self loop");
                   },
               },
               c);
  }
  check_acyclic(names_, constraints_);
}

ConstraintSet ConstraintSet::single_mutual_exclusion(std::vector<std::string> label_names) {
  MutualExclusion me;
  for (std::uint32_t i = 0; i < label_names.size(); ++i) me.members.push_back(LabelId{i});
  std::vector<Constraint> cs;
  if (me.members.size() >= 2) cs.emplace_back(std::move(me));
  return ConstraintSet(std::move(label_names), std::move(cs));
}

std::optional<LabelId> ConstraintSet::find(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

LabelId ConstraintSet::id(std::string_view name) const {
  if (auto found = find(name)) return *found;
  throw ConfigError("unknown label '" + std::string(name) + "'");
}

const MutualExclusion* ConstraintSet::sole_mutual_exclusion() const noexcept {
  if (constraints_.size() != 1) return nullptr;
  return std::get_if<MutualExclusion>(&constraints_.front());
}

std::size_t ConstraintSet::num_mutual_exclusions() const noexcept {
  return static_cast<std::size_t>(std::count_if(constraints_.begin(), constraints_.end(), [](const Constraint& c) {
    return std::holds_alternative<MutualExclusion>(c);
  }));
}

std::size_t ConstraintSet::num_subsumptions() const noexcept { return constraints_.size() - num_mutual_exclusions(); }

std::optional<std::size_t> ConstraintSet::first_violation(std::span<const std::uint8_t> assignment) const {
  if (assignment.size() != names_.size())
    throw std::invalid_argument("assignment length does not match the number of labels");
  for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
    const bool ok = std::visit(Overloaded{
                                   [&](const MutualExclusion& me) {
                                     std::size_t positives = 0;
                                     for (auto m : me.members) positives += assignment[m.index] ? 1 : 0;
                                     return positives <= 1;
                                   },
                                   [&](const Subsumption& s) {
                                     return !(assignment[s.child.index] && !assignment[s.parent.index]);
                                   },
                               },
                               constraints_[ci]);
    if (!ok) return ci;
  }
  return std::nullopt;
}

bool ConstraintSet::satisfied_by(std::span<const std::uint8_t> assignment) const {
  return !first_violation(assignment).has_value();
}

std::string ConstraintSet::describe(const Constraint& c) const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const MutualExclusion& me) {
                   out << "mutual_exclusion{";
                   for (std::size_t i = 0; i < me.members.size(); ++i)
                     out << (i ? "," : "") << names_.at(me.members[i].index);
                   out << "}";
                 },
                 [&](const Subsumption& s) {
                   out << "subsumption(" << names_.at(s.parent.index) << " > " << names_.at(s.child.index) << ")";
                 },
             },
             c);
  return out.str();
}

PartialAssignment::PartialAssignment(std::size_t num_labels)
    : values_(num_labels, -1), origins_(num_labels, Origin::Requested) {}

std::optional<bool> PartialAssignment::value(LabelId id) const {
  const auto v = values_.at(id.index);
  if (v < 0) return std::nullopt;
  return v == 1;
}

std::optional<Origin> PartialAssignment::origin(LabelId id) const {
  if (values_.at(id.index) < 0) return std::nullopt;
  return origins_[id.index];
}

void PartialAssignment::fix(Literal lit, Origin origin) {
  auto& slot = values_.at(lit.label.index);
  if (slot >= 0) throw std::logic_error("label " + std::to_string(lit.label.index) + " is already fixed");
  slot = lit.value ? 1 : 0;
  origins_[lit.label.index] = origin;
  ++count_;
}

std::vector<Fix> PartialAssignment::fixes() const {
  std::vector<Fix> out;
  out.reserve(count_);
  for (std::uint32_t i = 0; i < values_.size(); ++i)
    if (values_[i] >= 0) out.push_back(Fix{Literal{LabelId{i}, values_[i] == 1}, origins_[i]});
  return out;
}

namespace {

struct Conflict {
  std::size_t constraint;
  LabelId label;
};

// Sweeps all constraints round by round until nothing changes. Returns the
// first conflict found, leaving `a` partially propagated.
std::optional<Conflict> run_fixpoint(const ConstraintSet& cs, PartialAssignment& a, PropagationStats& stats) {
  const auto constraints = cs.constraints();
  bool changed = true;
  while (changed) {
    changed = false;
    ++stats.rounds;
    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
      const auto& c = constraints[ci];
      if (const auto* me = std::get_if<MutualExclusion>(&c)) {
        std::optional<LabelId> positive;
        for (auto m : me->members) {
          ++stats.rule_applications;
          if (a.value(m) == std::optional<bool>(true)) {
            if (positive) return Conflict{ci, m};
            positive = m;
          }
        }
        if (!positive) continue;
        for (auto m : me->members) {
          if (m == *positive || a.is_fixed(m)) continue;
          a.fix(Literal{m, false}, Origin::Propagated);
          changed = true;
        }
      } else {
        const auto& s = std::get<Subsumption>(c);
        stats.rule_applications += 2;
        const auto parent = a.value(s.parent);
        const auto child = a.value(s.child);
        if (child == std::optional<bool>(true)) {
          if (parent == std::optional<bool>(false)) return Conflict{ci, s.child};
          if (!parent) {
            a.fix(Literal{s.parent, true}, Origin::Propagated);
            changed = true;
          }
        } else if (parent == std::optional<bool>(false) && !child) {
          a.fix(Literal{s.child, false}, Origin::Propagated);
          changed = true;
        }
      }
    }
  }
  return std::nullopt;
}

[[noreturn]] void throw_conflict(const ConstraintSet& cs, const Conflict& conflict) {
  throw Inconsistency("constraint " + cs.describe(conflict.constraint) + " cannot hold: label '" +
                      cs.name(conflict.label) + "' is forced to both values");
}

void check_sizes(const ConstraintSet& cs, const PartialAssignment& seed) {
  if (seed.num_labels() != cs.num_labels())
    throw std::invalid_argument("assignment has " + std::to_string(seed.num_labels()) + " labels, constraint set has " +
                                std::to_string(cs.num_labels()));
}

}  // namespace

std::optional<PartialAssignment> try_propagate(const ConstraintSet& cs, const PartialAssignment& seed,
                                               Literal new_fix, PropagationStats* stats) {
  check_sizes(cs, seed);
  if (seed.is_fixed(new_fix.label))
    throw std::invalid_argument("label '" + cs.name(new_fix.label) + "' is already fixed in the seed");
  PropagationStats local;
  PartialAssignment result = seed;
  result.fix(new_fix, Origin::Requested);
  const auto conflict = run_fixpoint(cs, result, stats ? *stats : local);
  if (conflict) return std::nullopt;
  return result;
}

PartialAssignment propagate(const ConstraintSet& cs, const PartialAssignment& seed, Literal new_fix,
                            PropagationStats* stats) {
  check_sizes(cs, seed);
  if (seed.is_fixed(new_fix.label))
    throw std::invalid_argument("label '" + cs.name(new_fix.label) + "' is already fixed in the seed");
  PropagationStats local;
  PartialAssignment result = seed;
  result.fix(new_fix, Origin::Requested);
  if (const auto conflict = run_fixpoint(cs, result, stats ? *stats : local)) throw_conflict(cs, *conflict);
  return result;
}

PartialAssignment close(const ConstraintSet& cs, const PartialAssignment& seed, PropagationStats* stats) {
  check_sizes(cs, seed);
  PropagationStats local;
  PartialAssignment result = seed;
  if (const auto conflict = run_fixpoint(cs, result, stats ? *stats : local)) throw_conflict(cs, *conflict);
  return result;
}

std::size_t closure_size(const ConstraintSet& cs, Literal fix) {
  return propagate(cs, PartialAssignment(cs.num_labels()), fix).size();
}

bool is_consistent(const ConstraintSet& cs, const PartialAssignment& a) {
  // Every rule is a binary clause, so a conflict-free closure extends to a
  // complete assignment by setting the remaining labels to 0.
  check_sizes(cs, a);
  PartialAssignment closed = a;
  PropagationStats stats;
  return !run_fixpoint(cs, closed, stats).has_value();
}

std::vector<std::vector<std::uint8_t>> enumerate_valid_assignments(const ConstraintSet& cs, std::size_t cap) {
  const std::size_t k = cs.num_labels();
  if (k > cap || k >= 63)
    throw CapExceeded("enumeration over " + std::to_string(k) + " labels exceeds the cap of " + std::to_string(cap));
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> assignment(k);
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t j = 0; j < k; ++j) assignment[j] = (mask >> (k - 1 - j)) & 1U;
    if (cs.satisfied_by(assignment)) out.push_back(assignment);
  }
  return out;
}

}  // namespace actlogic
