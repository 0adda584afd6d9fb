#include "actlogic/constraint_config.hpp"

#include <fstream>

#include "actlogic/errors.hpp"

namespace actlogic {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string(where) + " is missing \"" + key + "\"");
  return obj.at(key);
}

std::string require_string(const json& value, const char* where) {
  if (!value.is_string()) throw ConfigError(std::string(where) + " must be a string");
  return value.get<std::string>();
}

}  // namespace

ConstraintSet constraint_set_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("constraint config must be a JSON object");
  const auto& labels = require(doc, "labels", "constraint config");
  if (!labels.is_array()) throw ConfigError("\"labels\" must be an array of strings");
  std::vector<std::string> names;
  for (const auto& l : labels) names.push_back(require_string(l, "label name"));

  std::unordered_map<std::string, LabelId> index;
  for (std::uint32_t i = 0; i < names.size(); ++i) index.emplace(names[i], LabelId{i});
  const auto lookup = [&](const std::string& name) {
    const auto it = index.find(name);
    if (it == index.end()) throw ConfigError("constraint references undeclared label '" + name + "'");
    return it->second;
  };

  std::vector<Constraint> constraints;
  if (doc.contains("constraints")) {
    const auto& list = doc.at("constraints");
    if (!list.is_array()) throw ConfigError("\"constraints\" must be an array");
    for (const auto& entry : list) {
      const auto type = require_string(require(entry, "type", "constraint"), "constraint type");
      if (type == "mutual_exclusion") {
        const auto& members = require(entry, "labels", "mutual_exclusion constraint");
        if (!members.is_array()) throw ConfigError("mutual_exclusion \"labels\" must be an array");
        MutualExclusion me;
        for (const auto& m : members) me.members.push_back(lookup(require_string(m, "mutual_exclusion member")));
        constraints.emplace_back(std::move(me));
      } else if (type == "subsumption") {
        const auto parent = lookup(require_string(require(entry, "parent", "subsumption"), "subsumption parent"));
        const auto child = lookup(require_string(require(entry, "child", "subsumption"), "subsumption child"));
        constraints.emplace_back(Subsumption{parent, child});
      } else {
        throw ConfigError("unknown constraint type '" + type + "'");
      }
    }
  }
  return ConstraintSet(std::move(names), std::move(constraints));
}

json constraint_set_to_json(const ConstraintSet& cs) {
  json doc;
  doc["labels"] = cs.label_names();
  json list = json::array();
  for (const auto& c : cs.constraints()) {
    if (const auto* me = std::get_if<MutualExclusion>(&c)) {
      json members = json::array();
      for (auto m : me->members) members.push_back(cs.name(m));
      list.push_back({{"type", "mutual_exclusion"}, {"labels", members}});
    } else {
      const auto& s = std::get<Subsumption>(c);
      list.push_back({{"type", "subsumption"}, {"parent", cs.name(s.parent)}, {"child", cs.name(s.child)}});
    }
  }
  doc["constraints"] = list;
  return doc;
}

ConstraintSet load_constraint_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open constraint config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("constraint config " + path.string() + " is not valid JSON: " + e.what());
  }
  return constraint_set_from_json(doc);
}

void save_constraint_config(const ConstraintSet& cs, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << constraint_set_to_json(cs).dump(2) << '\n';
}

}  // namespace actlogic
