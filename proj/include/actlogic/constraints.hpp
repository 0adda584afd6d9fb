#pragma once

// Logical constraints among binary labels (mutual exclusion and subsumption)
// and the fixpoint propagation engine that computes what fixing one
// label-value pair implies.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace actlogic {

/// Dense index of a label within a ConstraintSet.
struct LabelId {
  std::uint32_t index = 0;

  friend auto operator<=>(const LabelId&, const LabelId&) = default;
};

/// At most one member may be positive.
struct MutualExclusion {
  std::vector<LabelId> members;
};

/// child = 1 implies parent = 1.
struct Subsumption {
  LabelId parent;
  LabelId child;
};

using Constraint = std::variant<MutualExclusion, Subsumption>;

/// A label fixed to a value.
struct Literal {
  LabelId label;
  bool value = false;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

enum class Origin : std::uint8_t { Requested, Propagated };

struct Fix {
  Literal literal;
  Origin origin = Origin::Requested;

  friend bool operator==(const Fix&, const Fix&) = default;
};

/// Validated, immutable set of labels and constraints over them.
///
/// Construction checks that names are unique, every referenced label exists,
/// mutual-exclusion groups have at least two distinct members, subsumption
/// edges are not self loops, and the subsumption graph is acyclic. Throws
/// ConfigError otherwise.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::vector<std::string> label_names, std::vector<Constraint> constraints);

  /// One mutual-exclusion group over every label.
  static ConstraintSet single_mutual_exclusion(std::vector<std::string> label_names);

  std::size_t num_labels() const noexcept { return names_.size(); }
  const std::vector<std::string>& label_names() const noexcept { return names_; }
  const std::string& name(LabelId id) const { return names_.at(id.index); }
  std::optional<LabelId> find(std::string_view name) const;
  /// Throws ConfigError for unknown names.
  LabelId id(std::string_view name) const;

  std::span<const Constraint> constraints() const noexcept { return constraints_; }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }

  /// The only constraint when the set is exactly one mutual-exclusion group, else null.
  const MutualExclusion* sole_mutual_exclusion() const noexcept;

  std::size_t num_mutual_exclusions() const noexcept;
  std::size_t num_subsumptions() const noexcept;

  /// Whether a complete 0/1 assignment satisfies every constraint.
  bool satisfied_by(std::span<const std::uint8_t> assignment) const;
  /// Index of the first violated constraint, if any.
  std::optional<std::size_t> first_violation(std::span<const std::uint8_t> assignment) const;

  /// Human-readable rendering such as "mutual_exclusion{bird,fish}".
  std::string describe(const Constraint& c) const;
  std::string describe(std::size_t constraint_index) const { return describe(constraints_.at(constraint_index)); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, LabelId> by_name_;
  std::vector<Constraint> constraints_;
};

/// Mapping from labels to fixed values, each tagged with how it was obtained.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::size_t num_labels);

  std::size_t num_labels() const noexcept { return values_.size(); }
  /// Number of fixed labels.
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  bool complete() const noexcept { return count_ == values_.size(); }

  bool is_fixed(LabelId id) const { return values_.at(id.index) >= 0; }
  std::optional<bool> value(LabelId id) const;
  std::optional<Origin> origin(LabelId id) const;

  /// Throws std::logic_error if the label is already fixed.
  void fix(Literal lit, Origin origin);

  /// Fixed entries in ascending label order.
  std::vector<Fix> fixes() const;

  friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

 private:
  std::vector<std::int8_t> values_;
  std::vector<Origin> origins_;
  std::size_t count_ = 0;
};

/// Work counters of one propagation call.
struct PropagationStats {
  std::size_t rounds = 0;
  std::size_t rule_applications = 0;
};

/// Least fixpoint of seed plus new_fix under
///   mutual exclusion:  member = 1  =>  every other member = 0
///   subsumption:       child = 1   =>  parent = 1
///                      parent = 0  =>  child = 0
/// Constraints are swept one by one, round after round, until a round adds
/// nothing. new_fix is tagged Requested, derived entries Propagated, and the
/// seed keeps its own tags. Throws Inconsistency when some label would receive
/// both values, and std::invalid_argument when new_fix's label is already fixed.
PartialAssignment propagate(const ConstraintSet& cs, const PartialAssignment& seed, Literal new_fix,
                            PropagationStats* stats = nullptr);

/// Same as propagate but reports inconsistency as an empty optional.
std::optional<PartialAssignment> try_propagate(const ConstraintSet& cs, const PartialAssignment& seed,
                                               Literal new_fix, PropagationStats* stats = nullptr);

/// Fixpoint of an assignment on its own (no new literal). Throws Inconsistency.
PartialAssignment close(const ConstraintSet& cs, const PartialAssignment& seed,
                        PropagationStats* stats = nullptr);

/// Number of entries in propagate(cs, {}, fix), the fix itself included.
std::size_t closure_size(const ConstraintSet& cs, Literal fix);

/// True iff some complete valid assignment extends `a`.
bool is_consistent(const ConstraintSet& cs, const PartialAssignment& a);

inline constexpr std::size_t kDefaultEnumerationCap = 20;

/// Every complete 0/1 vector satisfying cs, in lexicographic order (label 0
/// is the most significant position). Throws CapExceeded when K > cap.
std::vector<std::vector<std::uint8_t>> enumerate_valid_assignments(const ConstraintSet& cs,
                                                                    std::size_t cap = kDefaultEnumerationCap);

}  // namespace actlogic
