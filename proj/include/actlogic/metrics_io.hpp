#pragma once

// Metrics CSV, method-comparison CSV, and the JSON run manifest.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "actlogic/experiment.hpp"

namespace actlogic {

inline constexpr const char* kMetricsHeader = "iteration,average_auc,labels_requested,labels_fixed,wall_ms";

/// Header, one row per iteration, then "# iterations_to_target=<n|NA>".
void write_metrics_csv(const RunResult& r, std::ostream& out);
/// Writes the CSV to `path`; throws IoError.
void emit_metrics(const RunResult& r, const std::filesystem::path& path);
/// Inverse of write_metrics_csv (stop reason is not stored). Throws ParseError.
RunResult parse_metrics_csv(std::istream& in);

struct MethodRun {
  std::string method;
  RunResult result;
};

/// Same columns prefixed by "method", then one "# <method> iterations_to_target=<n|NA>" line per method.
void write_comparison_csv(const std::vector<MethodRun>& runs, std::ostream& out);

nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
/// Overlays fields present in `doc` onto `base`. Throws ConfigError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});

}  // namespace actlogic
