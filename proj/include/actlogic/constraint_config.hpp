#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "actlogic/constraints.hpp"

namespace actlogic {

/// Parses the JSON constraint config:
///
///   {"labels": ["animal", "bird", ...],
///    "constraints": [{"type": "mutual_exclusion", "labels": ["bird", "fish"]},
///                    {"type": "subsumption", "parent": "animal", "child": "bird"}]}
///
/// Throws ConfigError on any schema or validation problem.
ConstraintSet constraint_set_from_json(const nlohmann::json& doc);
nlohmann::json constraint_set_to_json(const ConstraintSet& cs);

ConstraintSet load_constraint_config(const std::filesystem::path& path);
void save_constraint_config(const ConstraintSet& cs, const std::filesystem::path& path);

}  // namespace actlogic
