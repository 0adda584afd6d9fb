#include "actlogic/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "actlogic/errors.hpp"
#include "actlogic/random.hpp"

namespace actlogic {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

bool skip_line(const std::vector<std::string_view>& tokens) { return tokens.empty() || tokens.front().front() == '#'; }

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

// Parses "index:value" tokens (1-based, strictly increasing) into a 0-based vector.
SparseVector parse_features(std::span<const std::string_view> tokens, std::size_t line_no) {
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  idx.reserve(tokens.size());
  val.reserve(tokens.size());
  for (auto tok : tokens) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected index:value, got '" + std::string(tok) + "'", line_no);
    std::uint64_t index = 0;
    const auto key = tok.substr(0, colon);
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
    if (ec != std::errc() || ptr != key.data() + key.size() || index == 0 || index > 0xFFFFFFFFULL)
      throw ParseError("bad feature index '" + std::string(key) + "'", line_no);
    double value = 0.0;
    if (!parse_double(tok.substr(colon + 1), value))
      throw ParseError("bad feature value '" + std::string(tok.substr(colon + 1)) + "'", line_no);
    const auto zero_based = static_cast<std::uint32_t>(index - 1);
    if (!idx.empty() && zero_based <= idx.back())
      throw ParseError("feature indices must be strictly increasing", line_no);
    idx.push_back(zero_based);
    val.push_back(value);
  }
  return SparseVector(std::move(idx), std::move(val));
}

std::string format_value(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void write_features(const SparseVector& x, std::ostream& out) {
  const auto idx = x.indices();
  const auto val = x.values();
  for (std::size_t j = 0; j < idx.size(); ++j) out << ' ' << (idx[j] + 1) << ':' << format_value(val[j]);
}

std::size_t feature_dim_of(const std::vector<SparseVector>& xs) {
  std::size_t d = 0;
  for (const auto& x : xs) d = std::max(d, x.min_dimension());
  return d;
}

}  // namespace

std::size_t Dataset::positives(LabelId k) const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < num_instances(); ++i) count += label(i, k) ? 1 : 0;
  return count;
}

void Dataset::validate() const {
  if (instances.empty()) throw ConfigError("dataset has no instances");
  if (label_names.empty()) throw ConfigError("dataset has no labels");
  if (truth.size() != instances.size() * label_names.size()) throw ConfigError("truth matrix has the wrong size");
  for (auto v : truth)
    if (v > 1) throw ConfigError("truth values must be 0 or 1");
  if (!instance_ids.empty() && instance_ids.size() != instances.size())
    throw ConfigError("instance id count does not match instance count");
  for (const auto& x : instances)
    if (x.min_dimension() > feature_dim) throw ConfigError("feature index exceeds feature_dim");
}

void validate_truth(const Dataset& d, const ConstraintSet& cs) {
  if (d.num_labels() != cs.num_labels())
    throw ConstraintViolation("dataset has " + std::to_string(d.num_labels()) + " labels but the constraint set has " +
                              std::to_string(cs.num_labels()));
  for (std::size_t i = 0; i < d.num_instances(); ++i) {
    if (const auto bad = cs.first_violation(d.truth_row(i))) {
      const std::string who = d.instance_ids.empty() ? "instance " + std::to_string(i) : "instance '" + d.instance_ids[i] + "'";
      throw ConstraintViolation(who + " violates " + cs.describe(*bad));
    }
  }
}

Dataset reorder_labels(const Dataset& d, const std::vector<std::string>& names) {
  if (names.size() != d.num_labels())
    throw ConfigError("dataset has " + std::to_string(d.num_labels()) + " labels, constraints declare " +
                      std::to_string(names.size()));
  std::vector<std::size_t> source(names.size());
  for (std::size_t j = 0; j < names.size(); ++j) {
    const auto it = std::find(d.label_names.begin(), d.label_names.end(), names[j]);
    if (it == d.label_names.end()) throw ConfigError("label '" + names[j] + "' does not occur in the dataset");
    source[j] = static_cast<std::size_t>(it - d.label_names.begin());
  }
  Dataset out = d;
  out.label_names = names;
  const std::size_t k = names.size();
  for (std::size_t i = 0; i < d.num_instances(); ++i)
    for (std::size_t j = 0; j < k; ++j) out.truth[i * k + j] = d.truth[i * k + source[j]];
  return out;
}

Dataset parse_libsvm_multiclass(std::istream& in) {
  std::vector<SparseVector> instances;
  std::vector<double> classes;
  std::map<double, std::string> class_names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (skip_line(tokens)) continue;
    double cls = 0.0;
    if (!parse_double(tokens[0], cls)) throw ParseError("bad class label '" + std::string(tokens[0]) + "'", line_no);
    instances.push_back(parse_features(std::span(tokens).subspan(1), line_no));
    classes.push_back(cls);
    class_names.emplace(cls, std::string(tokens[0]));
  }
  if (instances.empty()) throw EmptyFile("libsvm input");

  Dataset d;
  std::map<double, std::size_t> dense;
  for (const auto& [cls, name] : class_names) {
    dense.emplace(cls, d.label_names.size());
    d.label_names.push_back(name);
  }
  const std::size_t k = d.label_names.size();
  d.truth.assign(instances.size() * k, 0);
  for (std::size_t i = 0; i < instances.size(); ++i) d.truth[i * k + dense.at(classes[i])] = 1;
  d.feature_dim = feature_dim_of(instances);
  d.instances = std::move(instances);
  return d;
}

Dataset load_libsvm_multiclass(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_libsvm_multiclass(in);
  } catch (const EmptyFile&) {
    throw EmptyFile(path.string());
  }
}

void write_libsvm_multiclass(const Dataset& d, std::ostream& out) {
  for (std::size_t i = 0; i < d.num_instances(); ++i) {
    const auto row = d.truth_row(i);
    if (std::count(row.begin(), row.end(), std::uint8_t{1}) != 1)
      throw ConfigError("instance " + std::to_string(i) + " is not one-hot; cannot write LIBSVM multiclass");
    const auto k = static_cast<std::size_t>(std::find(row.begin(), row.end(), std::uint8_t{1}) - row.begin());
    out << d.label_names[k];
    write_features(d.instances[i], out);
    out << '\n';
  }
  if (!out) throw IoError("failed writing LIBSVM output");
}

Dataset parse_sparse_labels(std::istream& features, std::istream& labels, const ConstraintSet& cs) {
  Dataset d;
  d.label_names = cs.label_names();
  std::unordered_map<std::string, std::size_t> row_of;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(features, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (skip_line(tokens)) continue;
    std::string id(tokens[0]);
    if (!row_of.emplace(id, d.instances.size()).second) throw ParseError("duplicate instance id '" + id + "'", line_no);
    d.instances.push_back(parse_features(std::span(tokens).subspan(1), line_no));
    d.instance_ids.push_back(std::move(id));
  }
  if (d.instances.empty()) throw EmptyFile("features input");

  const std::size_t k = cs.num_labels();
  d.truth.assign(d.instances.size() * k, 0);
  std::vector<std::int8_t> seen(d.truth.size(), -1);
  line_no = 0;
  while (std::getline(labels, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (skip_line(tokens)) continue;
    if (tokens.size() != 3) throw ParseError("expected '<instance_id> <label> <0|1>'", line_no);
    const auto row = row_of.find(std::string(tokens[0]));
    if (row == row_of.end()) throw ParseError("unknown instance id '" + std::string(tokens[0]) + "'", line_no);
    const auto label = cs.find(tokens[1]);
    if (!label) throw ParseError("unknown label '" + std::string(tokens[1]) + "'", line_no);
    if (tokens[2] != "0" && tokens[2] != "1") throw ParseError("label value must be 0 or 1", line_no);
    const std::int8_t value = tokens[2] == "1" ? 1 : 0;
    auto& slot = seen[row->second * k + label->index];
    if (slot >= 0 && slot != value)
      throw ParseError("conflicting values for instance '" + std::string(tokens[0]) + "' label '" + std::string(tokens[1]) + "'",
                       line_no);
    slot = value;
    d.truth[row->second * k + label->index] = static_cast<std::uint8_t>(value);
  }
  d.feature_dim = feature_dim_of(d.instances);
  validate_truth(d, cs);
  return d;
}

Dataset load_sparse_labels(const std::filesystem::path& features_path, const std::filesystem::path& labels_path,
                           const ConstraintSet& cs) {
  std::ifstream features(features_path);
  if (!features) throw IoError("cannot open " + features_path.string());
  std::ifstream labels(labels_path);
  if (!labels) throw IoError("cannot open " + labels_path.string());
  try {
    return parse_sparse_labels(features, labels, cs);
  } catch (const EmptyFile&) {
    throw EmptyFile(features_path.string());
  }
}

void write_sparse_labels(const Dataset& d, std::ostream& features, std::ostream& labels) {
  for (std::size_t i = 0; i < d.num_instances(); ++i) {
    const std::string id = d.instance_ids.empty() ? "x" + std::to_string(i) : d.instance_ids[i];
    features << id;
    write_features(d.instances[i], features);
    features << '\n';
    for (std::uint32_t k = 0; k < d.num_labels(); ++k)
      if (d.label(i, LabelId{k})) labels << id << ' ' << d.label_names[k] << " 1\n";
  }
  if (!features || !labels) throw IoError("failed writing sparse dataset");
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  if (spec.train_count == 0 || spec.train_count >= n)
    throw ConfigError("train_count must be in (0, " + std::to_string(n) + "), got " + std::to_string(spec.train_count));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  shuffle(std::span<std::size_t>(order), rng);
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.train_count));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(spec.train_count), order.end());
  return out;
}

Dataset subset(const Dataset& d, std::span<const std::size_t> rows) {
  Dataset out;
  out.label_names = d.label_names;
  out.feature_dim = d.feature_dim;
  const std::size_t k = d.num_labels();
  for (auto r : rows) {
    out.instances.push_back(d.instances.at(r));
    out.truth.insert(out.truth.end(), d.truth.begin() + static_cast<std::ptrdiff_t>(r * k),
                     d.truth.begin() + static_cast<std::ptrdiff_t>((r + 1) * k));
    if (!d.instance_ids.empty()) out.instance_ids.push_back(d.instance_ids[r]);
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec) {
  const auto idx = split_indices(d.num_instances(), spec);
  return {subset(d, idx.train), subset(d, idx.test)};
}

void scale_features_max_abs(Dataset& d) {
  std::vector<double> max_abs(d.feature_dim, 0.0);
  for (const auto& x : d.instances) {
    const auto idx = x.indices();
    const auto val = x.values();
    for (std::size_t j = 0; j < idx.size(); ++j) max_abs[idx[j]] = std::max(max_abs[idx[j]], std::abs(val[j]));
  }
  for (auto& m : max_abs) m = m > 0.0 ? 1.0 / m : 1.0;
  for (auto& x : d.instances) x.scale_values(max_abs);
}

}  // namespace actlogic
