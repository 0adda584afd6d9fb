#pragma once

// Datasets: sparse instances with an N x K binary ground-truth matrix.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "actlogic/constraints.hpp"
#include "actlogic/learner.hpp"

namespace actlogic {

struct Dataset {
  std::vector<SparseVector> instances;
  /// Row-major N x K, values in {0, 1}.
  std::vector<std::uint8_t> truth;
  std::vector<std::string> label_names;
  std::size_t feature_dim = 0;
  /// Optional external ids (sparse two-file format); empty or length N.
  std::vector<std::string> instance_ids;

  std::size_t num_instances() const noexcept { return instances.size(); }
  std::size_t num_labels() const noexcept { return label_names.size(); }
  bool label(std::size_t i, LabelId k) const { return truth[i * num_labels() + k.index] != 0; }
  std::span<const std::uint8_t> truth_row(std::size_t i) const { return {truth.data() + i * num_labels(), num_labels()}; }
  std::size_t positives(LabelId k) const;

  /// Shape checks (N, K > 0, truth size and values, feature indices). Throws ConfigError.
  void validate() const;
};

/// Throws ConstraintViolation naming the first offending instance and constraint.
void validate_truth(const Dataset& d, const ConstraintSet& cs);

/// Reorders truth columns to follow `names`. Throws ConfigError when the two
/// label sets differ.
Dataset reorder_labels(const Dataset& d, const std::vector<std::string>& names);

/// LIBSVM multiclass text: "<class> <index>:<value> ..." with 1-based,
/// strictly increasing feature indices; '#' starts a comment line. Classes
/// become one-hot truth rows over K dense labels ordered by numeric class
/// value; label_names hold the original class tokens.
Dataset parse_libsvm_multiclass(std::istream& in);
Dataset load_libsvm_multiclass(const std::filesystem::path& path);
/// Requires exactly one positive label per row.
void write_libsvm_multiclass(const Dataset& d, std::ostream& out);

/// Two-file format. Features: "<instance_id> <index>:<value> ..." (1-based
/// indices). Labels: "<instance_id> <label_name> <0|1>"; unlisted pairs are 0.
/// Label order follows cs; truth rows are validated against cs.
Dataset parse_sparse_labels(std::istream& features, std::istream& labels, const ConstraintSet& cs);
Dataset load_sparse_labels(const std::filesystem::path& features_path, const std::filesystem::path& labels_path,
                           const ConstraintSet& cs);
/// Writes every positive pair to the labels stream. Instances without ids get "x<i>".
void write_sparse_labels(const Dataset& d, std::ostream& features, std::ostream& labels);

struct SplitSpec {
  std::size_t train_count = 0;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded uniform shuffle; the first train_count positions form the training
/// side. Throws ConfigError unless 0 < train_count < n.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);
Dataset subset(const Dataset& d, std::span<const std::size_t> rows);
std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec);

/// Divides every feature by its largest absolute value (sparsity preserving).
void scale_features_max_abs(Dataset& d);

}  // namespace actlogic
