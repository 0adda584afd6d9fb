#include "actlogic/metrics_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "actlogic/errors.hpp"

namespace actlogic {

using nlohmann::json;

namespace {

std::string auc_text(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void write_row(std::ostream& out, const IterationMetrics& m) {
  out << m.iteration << ',' << auc_text(m.average_auc) << ',' << m.labels_requested << ',' << m.labels_fixed << ','
      << m.wall_ms << '\n';
}

std::string target_text(const RunResult& r) {
  return r.iterations_to_target ? std::to_string(*r.iterations_to_target) : "NA";
}

}  // namespace

void write_metrics_csv(const RunResult& r, std::ostream& out) {
  out << kMetricsHeader << '\n';
  for (const auto& m : r.iterations) write_row(out, m);
  out << "# iterations_to_target=" << target_text(r) << '\n';
}

void emit_metrics(const RunResult& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_metrics_csv(r, out);
  if (!out) throw IoError("failed writing " + path.string());
}

RunResult parse_metrics_csv(std::istream& in) {
  RunResult r;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string key = "# iterations_to_target=";
      if (line.rfind(key, 0) == 0) {
        const auto value = line.substr(key.size());
        if (value != "NA") {
          try {
            r.iterations_to_target = std::stoul(value);
          } catch (const std::exception&) {
            throw ParseError("bad iterations_to_target '" + value + "'", line_no);
          }
        }
      }
      continue;
    }
    if (!header) {
      if (line != kMetricsHeader) throw ParseError("unexpected metrics header '" + line + "'", line_no);
      header = true;
      continue;
    }
    std::istringstream row(line);
    IterationMetrics m;
    char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    if (!(row >> m.iteration >> c1 >> m.average_auc >> c2 >> m.labels_requested >> c3 >> m.labels_fixed >> c4 >>
          m.wall_ms) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
      throw ParseError("malformed metrics row", line_no);
    r.iterations.push_back(m);
  }
  if (!header) throw ParseError("metrics CSV has no header", 0);
  return r;
}

void write_comparison_csv(const std::vector<MethodRun>& runs, std::ostream& out) {
  out << "method," << kMetricsHeader << '\n';
  for (const auto& run : runs)
    for (const auto& m : run.result.iterations) {
      out << run.method << ',';
      write_row(out, m);
    }
  for (const auto& run : runs) out << "# " << run.method << " iterations_to_target=" << target_text(run.result) << '\n';
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
  return json{{"method", cfg.method.name()},
              {"per_iteration", cfg.per_iteration},
              {"max_iterations", cfg.max_iterations},
              {"target_auc", cfg.target_auc},
              {"stop_at_target", cfg.stop_at_target},
              {"seed", cfg.seed},
              {"split", {{"train_count", cfg.split.train_count}, {"seed", cfg.split.seed}}},
              {"train",
               {{"batch_size", cfg.train.batch_size},
                {"learning_rate", cfg.train.learning_rate},
                {"l2", cfg.train.l2},
                {"epochs", cfg.train.epochs},
                {"seed", cfg.train.seed}}}};
}

ExperimentConfig experiment_config_from_json(const json& doc, ExperimentConfig base) {
  if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
  try {
    if (doc.contains("method")) base.method = ScoringMethod::parse(doc.at("method").get<std::string>());
    if (doc.contains("per_iteration")) base.per_iteration = doc.at("per_iteration").get<std::size_t>();
    if (doc.contains("max_iterations")) base.max_iterations = doc.at("max_iterations").get<std::size_t>();
    if (doc.contains("target_auc")) base.target_auc = doc.at("target_auc").get<double>();
    if (doc.contains("stop_at_target")) base.stop_at_target = doc.at("stop_at_target").get<bool>();
    if (doc.contains("seed")) base.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("split")) {
      const auto& s = doc.at("split");
      if (s.contains("train_count")) base.split.train_count = s.at("train_count").get<std::size_t>();
      if (s.contains("seed")) base.split.seed = s.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("train")) {
      const auto& t = doc.at("train");
      if (t.contains("batch_size")) base.train.batch_size = t.at("batch_size").get<std::size_t>();
      if (t.contains("learning_rate")) base.train.learning_rate = t.at("learning_rate").get<double>();
      if (t.contains("l2")) base.train.l2 = t.at("l2").get<double>();
      if (t.contains("epochs")) base.train.epochs = t.at("epochs").get<std::size_t>();
      if (t.contains("seed")) base.train.seed = t.at("seed").get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  return base;
}

}  // namespace actlogic
