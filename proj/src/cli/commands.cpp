#include "actlogic/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "actlogic/cli/svg.hpp"
#include "actlogic/constraint_config.hpp"
#include "actlogic/errors.hpp"
#include "actlogic/experiment.hpp"
#include "actlogic/metrics_io.hpp"
#include "actlogic/oracle.hpp"
#include "actlogic/synthetic.hpp"

namespace actlogic::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct InputOptions {
  std::string dataset;
  std::string format = "libsvm";
  std::string labels;
  std::string constraints;
  bool scale_features = false;
};

struct ExperimentOptions {
  std::string method;
  std::size_t per_iter = 0;
  std::size_t max_iters = 0;
  double target_auc = 0.0;
  std::size_t train_count = 0;
  std::uint64_t seed = 0;
  std::string manifest;
  bool run_to_end = false;
};

// Options whose explicit presence on the command line overrides the manifest.
struct Given {
  CLI::Option* dataset = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* labels = nullptr;
  CLI::Option* constraints = nullptr;
  CLI::Option* scale = nullptr;
  CLI::Option* method = nullptr;
  CLI::Option* per_iter = nullptr;
  CLI::Option* max_iters = nullptr;
  CLI::Option* target_auc = nullptr;
  CLI::Option* train_count = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* run_to_end = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

void add_input_options(CLI::App* app, InputOptions& in, Given& g) {
  g.dataset = app->add_option("--dataset", in.dataset, "Dataset path (LIBSVM file or sparse features file)")
                  ->check(CLI::ExistingFile);
  g.format = app->add_option("--format", in.format, "Dataset format")->check(CLI::IsMember({"libsvm", "sparse"}));
  g.labels = app->add_option("--labels", in.labels, "Labels file for the sparse format")->check(CLI::ExistingFile);
  g.constraints =
      app->add_option("--constraints", in.constraints, "Constraint config (JSON)")->check(CLI::ExistingFile);
  g.scale = app->add_flag("--scale-features", in.scale_features, "Scale each feature by its largest magnitude");
}

void add_experiment_options(CLI::App* app, ExperimentOptions& ex, Given& g) {
  g.per_iter = app->add_option("--per-iter", ex.per_iter, "Label requests per iteration")->check(CLI::PositiveNumber);
  g.max_iters = app->add_option("--max-iters", ex.max_iters, "Iteration limit")->check(CLI::PositiveNumber);
  g.target_auc = app->add_option("--target-auc", ex.target_auc, "Average AUC that ends the run");
  g.train_count = app->add_option("--train-count", ex.train_count, "Fully labelled training instances");
  g.seed = app->add_option("--seed", ex.seed, "Root seed for the split, selection and training");
  app->add_option("--manifest", ex.manifest, "JSON manifest supplying defaults (flags take precedence)")
      ->check(CLI::ExistingFile);
  g.run_to_end = app->add_flag("--run-to-end", ex.run_to_end, "Keep going after the target AUC is reached");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string manifest_string(const json& inputs, const char* key) {
  if (!inputs.contains(key)) return {};
  if (!inputs.at(key).is_string()) throw ConfigError(std::string("manifest input '") + key + "' must be a string");
  return inputs.at(key).get<std::string>();
}

// Fills inputs missing from the command line with manifest values.
void merge_inputs(InputOptions& in, const Given& g, const json& manifest) {
  if (!manifest.contains("inputs")) return;
  const auto& inputs = manifest.at("inputs");
  if (!inputs.is_object()) throw ConfigError("manifest 'inputs' must be an object");
  if (!given(g.dataset)) in.dataset = manifest_string(inputs, "dataset");
  if (!given(g.format) && inputs.contains("format")) in.format = manifest_string(inputs, "format");
  if (!given(g.labels)) in.labels = manifest_string(inputs, "labels");
  if (!given(g.constraints)) in.constraints = manifest_string(inputs, "constraints");
  if (!given(g.scale) && inputs.contains("scale_features")) in.scale_features = inputs.at("scale_features").get<bool>();
}

void check_inputs(const InputOptions& in) {
  if (in.format != "libsvm" && in.format != "sparse") throw ConfigError("format must be libsvm or sparse");
  if (in.dataset.empty()) throw ConfigError("--dataset is required");
  const auto must_exist = [](const std::string& p, const char* what) {
    if (!p.empty() && !fs::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: " + p);
  };
  must_exist(in.dataset, "dataset");
  must_exist(in.labels, "labels file");
  must_exist(in.constraints, "constraint config");
  if (in.format == "sparse" && (in.labels.empty() || in.constraints.empty()))
    throw ConfigError("the sparse format needs --labels and --constraints");
  if (in.format == "libsvm" && !in.labels.empty()) throw ConfigError("--labels only applies to the sparse format");
}

ConstraintSet single_group(const std::vector<std::string>& names) {
  MutualExclusion group;
  for (std::uint32_t k = 0; k < names.size(); ++k) group.members.push_back(LabelId{k});
  std::vector<Constraint> cs;
  if (names.size() >= 2) cs.emplace_back(std::move(group));
  return ConstraintSet(names, std::move(cs));
}

struct Loaded {
  Dataset data;
  ConstraintSet cs;
};

Loaded load_inputs(const InputOptions& in) {
  std::optional<ConstraintSet> cs;
  if (!in.constraints.empty()) cs = load_constraint_config(in.constraints);
  Dataset d;
  if (in.format == "sparse") {
    d = load_sparse_labels(in.dataset, in.labels, *cs);
  } else {
    d = load_libsvm_multiclass(in.dataset);
    if (!cs) cs = single_group(d.label_names);
    d = reorder_labels(d, cs->label_names());
  }
  validate_truth(d, *cs);
  if (in.scale_features) scale_features_max_abs(d);
  return Loaded{std::move(d), std::move(*cs)};
}

ScoringMethod parse_cli_method(const std::string& name) {
  if (std::find(kMethodNames.begin(), kMethodNames.end(), name) == kMethodNames.end())
    throw ConfigError("unknown method '" + name + "'; valid methods: " + method_names_list());
  return ScoringMethod::parse(name);
}

ExperimentConfig resolve_config(const ExperimentOptions& ex, const Given& g, const json* manifest, std::size_t n) {
  ExperimentConfig cfg;
  if (manifest) cfg = experiment_config_from_json(manifest->contains("config") ? manifest->at("config") : *manifest, cfg);
  const bool split_seed_set = manifest && manifest->contains("config") && manifest->at("config").contains("split") &&
                              manifest->at("config").at("split").contains("seed");
  if (given(g.method)) cfg.method = parse_cli_method(ex.method);
  if (given(g.per_iter)) cfg.per_iteration = ex.per_iter;
  if (given(g.max_iters)) cfg.max_iterations = ex.max_iters;
  if (given(g.target_auc)) cfg.target_auc = ex.target_auc;
  if (given(g.train_count)) cfg.split.train_count = ex.train_count;
  if (given(g.seed)) {
    cfg.seed = ex.seed;
    cfg.split.seed = ex.seed;
  } else if (!split_seed_set) {
    cfg.split.seed = cfg.seed;
  }
  if (given(g.run_to_end)) cfg.stop_at_target = !ex.run_to_end;
  if (cfg.split.train_count == 0 && n >= 2) cfg.split.train_count = std::clamp<std::size_t>(n / 10, 1, n - 1);
  cfg.validate();
  return cfg;
}

json inputs_json(const InputOptions& in) {
  json j{{"dataset", in.dataset}, {"format", in.format}, {"scale_features", in.scale_features}};
  if (!in.labels.empty()) j["labels"] = in.labels;
  if (!in.constraints.empty()) j["constraints"] = in.constraints;
  return j;
}

const char* stop_name(StopReason s) {
  switch (s) {
    case StopReason::TargetReached: return "target_reached";
    case StopReason::PoolExhausted: return "pool_exhausted";
    case StopReason::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

json result_json(const RunResult& r) {
  json j{{"iterations", r.iterations.size()}, {"stop", stop_name(r.stop)}};
  j["iterations_to_target"] = r.iterations_to_target ? json(*r.iterations_to_target) : json(nullptr);
  if (!r.iterations.empty()) j["final_average_auc"] = r.iterations.back().average_auc;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string target_text(const RunResult& r) {
  return r.iterations_to_target ? std::to_string(*r.iterations_to_target) : std::string("not reached");
}

// ---------------------------------------------------------------- commands

struct RunArgs {
  InputOptions in;
  ExperimentOptions ex;
  Given g;
  std::string out;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  InputOptions in = a.in;
  std::optional<json> manifest;
  if (!a.ex.manifest.empty()) manifest = read_json(a.ex.manifest);
  if (manifest) merge_inputs(in, a.g, *manifest);
  check_inputs(in);
  if (!given(a.g.method) && !(manifest && (manifest->contains("config") || manifest->contains("method"))))
    throw ConfigError("--method is required (or a manifest that names one)");

  const auto loaded = load_inputs(in);
  const auto cfg = resolve_config(a.ex, a.g, manifest ? &*manifest : nullptr, loaded.data.num_instances());
  cfg.method.validate(loaded.cs);

  const auto result = run_experiment(loaded.data, loaded.cs, cfg);
  emit_metrics(result, a.out);
  const json m{{"config", experiment_config_to_json(cfg)}, {"inputs", inputs_json(in)}, {"result", result_json(result)}};
  write_text(a.out + ".manifest.json", m.dump(2) + "\n");

  out << "method " << cfg.method.name() << ": " << result.iterations.size() << " iterations, stop "
      << stop_name(result.stop) << ", iterations to target " << target_text(result) << "\n";
  if (!result.iterations.empty()) {
    const auto& last = result.iterations.back();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", last.average_auc);
    out << "final average AUC " << buf << ", requested " << last.labels_requested << ", fixed " << last.labels_fixed
        << "\n";
  }
  out << "wrote " << a.out << " and " << a.out << ".manifest.json\n";
  return kExitOk;
}

struct CompareArgs {
  RunArgs run;
  std::vector<std::string> methods;
};

fs::path sibling(const fs::path& csv, const std::string& suffix) {
  fs::path p = csv;
  p.replace_extension();
  p += suffix;
  return p;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  std::vector<std::string> methods;
  for (const auto& m : a.methods) {
    std::stringstream ss(m);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) methods.push_back(part);
  }
  if (methods.size() < 2) throw ConfigError("compare needs at least two methods");
  for (const auto& m : methods) parse_cli_method(m);

  InputOptions in = a.run.in;
  std::optional<json> manifest;
  if (!a.run.ex.manifest.empty()) manifest = read_json(a.run.ex.manifest);
  if (manifest) merge_inputs(in, a.run.g, *manifest);
  check_inputs(in);
  const auto loaded = load_inputs(in);
  const auto base = resolve_config(a.run.ex, a.run.g, manifest ? &*manifest : nullptr, loaded.data.num_instances());

  std::vector<MethodRun> runs;
  for (const auto& m : methods) {
    ExperimentConfig cfg = base;
    cfg.method = ScoringMethod::parse(m);
    cfg.method.validate(loaded.cs);
    runs.push_back(MethodRun{m, run_experiment(loaded.data, loaded.cs, cfg)});
    out << m << ": " << runs.back().result.iterations.size() << " iterations, iterations to target "
        << target_text(runs.back().result) << "\n";
  }

  std::ostringstream csv;
  write_comparison_csv(runs, csv);
  write_text(a.run.out, csv.str());

  std::vector<Series> series;
  std::vector<Bar> bars;
  for (const auto& r : runs) {
    Series s{r.method, {}, {}};
    for (const auto& it : r.result.iterations) {
      s.x.push_back(static_cast<double>(it.iteration));
      s.y.push_back(it.average_auc);
    }
    series.push_back(std::move(s));
    bars.push_back(Bar{r.method, r.result.iterations_to_target
                                     ? std::optional<double>(static_cast<double>(*r.result.iterations_to_target))
                                     : std::nullopt});
  }
  const auto auc_svg = sibling(a.run.out, ".auc.svg");
  const auto bar_svg = sibling(a.run.out, ".iterations.svg");
  write_text(auc_svg, line_chart("Average AUC by iteration", "iteration", "average AUC", series));
  char target[32];
  std::snprintf(target, sizeof target, "%g", base.target_auc);
  write_text(bar_svg, bar_chart(std::string("Iterations to AUC ") + target, "iterations", bars));
  out << "wrote " << a.run.out << ", " << auc_svg.string() << ", " << bar_svg.string() << "\n";
  return kExitOk;
}

int cmd_validate(const InputOptions& in, std::ostream& out) {
  check_inputs(in);
  const auto loaded = load_inputs(in);
  const auto& cs = loaded.cs;
  out << "labels: " << cs.num_labels() << "\n";
  out << "instances: " << loaded.data.num_instances() << "\n";
  out << "features: " << loaded.data.feature_dim << "\n";
  out << "constraints: " << cs.num_constraints() << " (" << cs.num_mutual_exclusions() << " mutual exclusion, "
      << cs.num_subsumptions() << " subsumption)\n";
  for (std::size_t c = 0; c < cs.num_constraints(); ++c) out << "  " << cs.describe(c) << "\n";
  for (std::uint32_t k = 0; k < cs.num_labels(); ++k)
    out << "  label " << cs.name(LabelId{k}) << ": " << loaded.data.positives(LabelId{k}) << " positive\n";
  out << "consistent: yes\n";
  return kExitOk;
}

struct SynthArgs {
  std::string profile = "nell13";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const fs::path prefix(a.out);
  auto with = [&](const std::string& suffix) {
    fs::path p = prefix;
    p += suffix;
    return p;
  };
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  if (a.profile == "nell13") {
    const auto cs = nell13_constraints();
    HierarchyProfile profile;
    if (a.n) profile.num_instances = a.n;
    const auto d = synthesize_hierarchy(cs, nell13_default_joint(cs), profile, a.seed);
    std::ofstream features(with(".features"));
    std::ofstream labels(with(".labels"));
    if (!features || !labels) throw IoError("cannot write " + prefix.string() + ".{features,labels}");
    write_sparse_labels(d, features, labels);
    save_constraint_config(cs, with(".constraints.json"));
    out << "wrote " << with(".features").string() << ", " << with(".labels").string() << ", "
        << with(".constraints.json").string() << " (" << d.num_instances() << " instances, " << d.num_labels()
        << " labels)\n";
  } else {
    MulticlassProfile profile;
    if (a.n) {
      if (a.n < profile.num_classes) throw ConfigError("--n must be at least the number of classes");
      profile.per_class = a.n / profile.num_classes;
    }
    const auto d = synthesize_multiclass(profile, a.seed);
    std::ofstream svm(with(".svm"));
    if (!svm) throw IoError("cannot write " + with(".svm").string());
    write_libsvm_multiclass(d, svm);
    save_constraint_config(single_group(d.label_names), with(".constraints.json"));
    out << "wrote " << with(".svm").string() << ", " << with(".constraints.json").string() << " ("
        << d.num_instances() << " instances, " << d.num_labels() << " labels)\n";
  }
  return kExitOk;
}

struct OracleArgs {
  std::size_t k = 5;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

int cmd_oracle_check(const OracleArgs& a, std::ostream& out) {
  if (a.k < 2) throw ConfigError("--k must be at least 2");
  Rng rng(a.seed);
  std::size_t matches = 0;
  for (std::size_t t = 0; t < a.trials; ++t) {
    const auto p = random_me_marginals(a.k, rng);
    if (rankings_agree(p, me_information_gains(p), 1e-9)) ++matches;
  }
  out << matches << "/" << a.trials << " rankings match\n";
  return matches == a.trials ? kExitOk : kExitRuntimeError;
}

void add_oracle_options(CLI::App* app, OracleArgs& o) {
  app->add_option("--k", o.k, "Number of mutually exclusive labels")->check(CLI::Range(2, 16));
  app->add_option("--trials", o.trials, "Random marginal vectors to test");
  app->add_option("--seed", o.seed, "Seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Active learning with logical label constraints", "actlogic"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one active-learning experiment");
  add_input_options(run_cmd, run.in, run.g);
  run.g.method = run_cmd->add_option("--method", run.ex.method, "Scoring method: " + method_names_list());
  add_experiment_options(run_cmd, run.ex, run.g);
  run_cmd->add_option("--out", run.out, "Metrics CSV path; the manifest goes to <out>.manifest.json")->required();

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Run several methods with the same split and seed");
  add_input_options(cmp_cmd, cmp.run.in, cmp.run.g);
  cmp_cmd->add_option("--methods", cmp.methods, "Comma-separated method names")->required()->expected(1, -1);
  add_experiment_options(cmp_cmd, cmp.run.ex, cmp.run.g);
  cmp_cmd->add_option("--out", cmp.run.out, "Combined CSV path; charts are written next to it")->required();

  InputOptions val;
  Given val_given;
  auto* val_cmd = app.add_subcommand("validate", "Check a dataset against a constraint config");
  add_input_options(val_cmd, val, val_given);
  val_given.dataset->required();

  SynthArgs syn;
  auto* syn_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  syn_cmd->add_option("--profile", syn.profile, "nell13 (sparse pair) or segment (LIBSVM)")
      ->check(CLI::IsMember({"nell13", "segment"}));
  syn_cmd->add_option("--n", syn.n, "Number of instances");
  syn_cmd->add_option("--seed", syn.seed, "Seed");
  syn_cmd->add_option("--out", syn.out, "Output path prefix")->required();

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force oracle utilities")->group("");
  oracle_cmd->require_subcommand(1);
  auto* check_cmd = oracle_cmd->add_subcommand("check", "Compare probability and information-gain rankings");
  add_oracle_options(check_cmd, orc);
  auto* check_alias = app.add_subcommand("oracle-check", "Compare probability and information-gain rankings")->group("");
  add_oracle_options(check_alias, orc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*cmp_cmd) return cmd_compare(cmp, out);
    if (*val_cmd) return cmd_validate(val, out);
    if (*syn_cmd) return cmd_synth(syn, out);
    if (*check_cmd || *check_alias) return cmd_oracle_check(orc, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ConstraintViolation& e) {
    err << "constraint violation: " << e.what() << "\n";
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  err << "error: no command\n";
  return kExitConfigError;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace actlogic::cli
