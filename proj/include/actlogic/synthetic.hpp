#pragma once

// Desk-scale dataset generators used by the experiment harness and tests.

#include <cstddef>
#include <cstdint>

#include "actlogic/constraints.hpp"
#include "actlogic/data.hpp"
#include "actlogic/oracle.hpp"

namespace actlogic {

/// The 13-label animal/location hierarchy: subsumption edges from each
/// parent category to its children and mutual exclusion among siblings.
ConstraintSet nell13_constraints();

/// Default truth distribution over nell13_constraints(): most mass on
/// leaf categories, some on internal-only assignments and the all-zero row.
JointDistribution nell13_default_joint(const ConstraintSet& cs);

struct HierarchyProfile {
  std::size_t num_instances = 500;
  /// Dedicated indicator features per label.
  std::size_t features_per_label = 6;
  /// Shared background features that carry no label signal.
  std::size_t noise_features = 40;
  /// P(indicator on | label positive).
  double on_rate = 0.35;
  /// P(indicator on | label negative).
  double off_rate = 0.04;
  /// P(background feature on).
  double noise_rate = 0.05;
};

/// Samples a truth row per instance from `joint` (every support element must
/// satisfy cs), then draws binary indicator features per label.
Dataset synthesize_hierarchy(const ConstraintSet& cs, const JointDistribution& joint, const HierarchyProfile& profile,
                             std::uint64_t seed);

struct MulticlassProfile {
  std::size_t num_classes = 7;
  std::size_t per_class = 330;
  std::size_t num_features = 19;
  /// Spread of class centroids relative to unit within-class noise.
  double separation = 0.6;
};

/// Balanced Gaussian-mixture multiclass data with one-hot truth; label names
/// are "1".."num_classes". The defaults match the Segment shape: 7 balanced
/// classes, 2,310 instances, 19 features.
Dataset synthesize_multiclass(const MulticlassProfile& profile, std::uint64_t seed);

}  // namespace actlogic
