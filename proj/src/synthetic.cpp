#include "actlogic/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "actlogic/random.hpp"

namespace actlogic {

ConstraintSet nell13_constraints() {
  std::vector<std::string> names = {"animal", "bird", "fish", "mammal", "reptile",
                                    "location", "artificial_location", "natural_location",
                                    "city", "country", "lake", "river", "mountain"};
  auto id = [&](std::string_view n) {
    return LabelId{static_cast<std::uint32_t>(std::find(names.begin(), names.end(), n) - names.begin())};
  };
  std::vector<Constraint> cs;
  const auto sub = [&](std::string_view parent, std::string_view child) {
    cs.emplace_back(Subsumption{id(parent), id(child)});
  };
  const auto me = [&](std::initializer_list<std::string_view> members) {
    MutualExclusion group;
    for (auto m : members) group.members.push_back(id(m));
    cs.emplace_back(std::move(group));
  };
  for (auto child : {"bird", "fish", "mammal", "reptile"}) sub("animal", child);
  for (auto child : {"artificial_location", "natural_location"}) sub("location", child);
  for (auto child : {"city", "country"}) sub("artificial_location", child);
  for (auto child : {"lake", "river", "mountain"}) sub("natural_location", child);
  me({"animal", "location"});
  me({"bird", "fish", "mammal", "reptile"});
  me({"artificial_location", "natural_location"});
  me({"city", "country"});
  me({"lake", "river", "mountain"});
  return ConstraintSet(std::move(names), std::move(cs));
}

JointDistribution nell13_default_joint(const ConstraintSet& cs) {
  // A label with no subsumption children is a leaf; each valid assignment is
  // weighted by its deepest positive label.
  std::vector<bool> has_child(cs.num_labels(), false);
  for (const auto& c : cs.constraints())
    if (const auto* s = std::get_if<Subsumption>(&c)) has_child[s->parent.index] = true;

  JointDistribution j;
  j.num_labels = cs.num_labels();
  j.support = enumerate_valid_assignments(cs);
  double total = 0.0;
  for (const auto& a : j.support) {
    const auto positives = static_cast<std::size_t>(std::count(a.begin(), a.end(), std::uint8_t{1}));
    double w = 0.3;
    if (positives > 0) {
      bool reaches_leaf = false;
      for (std::size_t k = 0; k < a.size(); ++k) reaches_leaf = reaches_leaf || (a[k] && !has_child[k]);
      w = reaches_leaf ? 1.0 : 0.15;
    }
    j.mass.push_back(w);
    total += w;
  }
  for (auto& m : j.mass) m /= total;
  return j;
}

Dataset synthesize_hierarchy(const ConstraintSet& cs, const JointDistribution& joint, const HierarchyProfile& profile,
                             std::uint64_t seed) {
  joint.validate(&cs);
  if (profile.num_instances == 0) throw std::invalid_argument("num_instances must be positive");
  const std::size_t k = cs.num_labels();
  Rng rng(seed);
  std::vector<double> cumulative(joint.mass.size());
  std::partial_sum(joint.mass.begin(), joint.mass.end(), cumulative.begin());

  Dataset d;
  d.label_names = cs.label_names();
  d.feature_dim = k * profile.features_per_label + profile.noise_features;
  d.truth.reserve(profile.num_instances * k);
  for (std::size_t i = 0; i < profile.num_instances; ++i) {
    const double u = uniform01(rng) * cumulative.back();
    auto pick = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    pick = std::min(pick, joint.support.size() - 1);
    const auto& row = joint.support[pick];
    d.truth.insert(d.truth.end(), row.begin(), row.end());

    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    for (std::size_t label = 0; label < k; ++label) {
      const double rate = row[label] ? profile.on_rate : profile.off_rate;
      for (std::size_t f = 0; f < profile.features_per_label; ++f) {
        if (uniform01(rng) < rate) {
          idx.push_back(static_cast<std::uint32_t>(label * profile.features_per_label + f));
          val.push_back(1.0);
        }
      }
    }
    for (std::size_t f = 0; f < profile.noise_features; ++f) {
      if (uniform01(rng) < profile.noise_rate) {
        idx.push_back(static_cast<std::uint32_t>(k * profile.features_per_label + f));
        val.push_back(1.0);
      }
    }
    d.instances.emplace_back(std::move(idx), std::move(val));
    d.instance_ids.push_back("np" + std::to_string(i));
  }
  return d;
}

Dataset synthesize_multiclass(const MulticlassProfile& profile, std::uint64_t seed) {
  if (profile.num_classes < 2 || profile.per_class == 0 || profile.num_features == 0)
    throw std::invalid_argument("multiclass profile needs >= 2 classes, >= 1 instance per class and >= 1 feature");
  Rng rng(seed);
  const std::size_t c = profile.num_classes;
  const std::size_t f = profile.num_features;
  std::vector<double> centroids(c * f);
  for (auto& v : centroids) v = profile.separation * standard_normal(rng);

  std::vector<std::size_t> classes;
  for (std::size_t k = 0; k < c; ++k) classes.insert(classes.end(), profile.per_class, k);
  shuffle(std::span<std::size_t>(classes), rng);

  Dataset d;
  for (std::size_t k = 0; k < c; ++k) d.label_names.push_back(std::to_string(k + 1));
  d.feature_dim = f;
  d.truth.assign(classes.size() * c, 0);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::vector<std::uint32_t> idx(f);
    std::vector<double> val(f);
    for (std::size_t j = 0; j < f; ++j) {
      idx[j] = static_cast<std::uint32_t>(j);
      val[j] = centroids[classes[i] * f + j] + standard_normal(rng);
    }
    d.instances.emplace_back(std::move(idx), std::move(val));
    d.truth[i * c + classes[i]] = 1;
  }
  return d;
}

}  // namespace actlogic
