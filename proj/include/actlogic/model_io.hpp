#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "actlogic/learner.hpp"

namespace actlogic {

inline constexpr const char* kModelFormat = "ACTLOGIC-MODEL-1";

struct NamedModel {
  std::string label;
  LinearModel model;
};

/// JSON checkpoint: {"format": "ACTLOGIC-MODEL-1", "models": [{"label", "dimension",
/// "bias", "steps", "weights": [[index, value], ...], "accumulator": [[index, value], ...]}]}.
/// Only non-zero weight and accumulator entries are stored; the bias
/// accumulator uses index == dimension.
void save_models(const std::vector<NamedModel>& models, const std::filesystem::path& path);

/// Throws ParseError on a missing or wrong format tag or malformed records.
std::vector<NamedModel> load_models(const std::filesystem::path& path);

}  // namespace actlogic
