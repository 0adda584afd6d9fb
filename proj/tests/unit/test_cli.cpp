#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "actlogic/cli/commands.hpp"
#include "actlogic/constraint_config.hpp"
#include "actlogic/data.hpp"
#include "actlogic/scoring.hpp"

namespace fs = std::filesystem;
using actlogic::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops the trailing wall_ms column from every data row.
std::string mask_wall_ms(const std::string& csv) {
  static const std::regex last_field(",[0-9]+$");
  std::istringstream in(csv);
  std::string out;
  for (std::string line; std::getline(in, line);) out += (line.starts_with("#") ? line : std::regex_replace(line, last_field, ",*")) + "\n";
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("actlogic_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UnknownMethodListsTheCatalog) {
  ASSERT_EQ(cli({"synth", "--profile", "segment", "--n", "140", "--seed", "1", "--out", path("seg")}).code, 0);
  const auto r = cli({"run", "--dataset", path("seg.svm"), "--method", "greedy", "--out", path("m.csv")});
  EXPECT_EQ(r.code, 1);
  for (auto name : actlogic::kMethodNames) EXPECT_NE(r.err.find(name), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("m.csv")));
}

TEST_F(CliTest, RejectsUnknownFlagsAndMissingPaths) {
  EXPECT_EQ(cli({"oracle-check", "--k", "3", "--trials", "1", "--verbose"}).code, 1);
  EXPECT_EQ(cli({"run", "--dataset", path("absent.svm"), "--method", "random", "--out", path("m.csv")}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, SynthNellLoadsAsSparsePair) {
  const auto r = cli({"synth", "--profile", "nell13", "--n", "500", "--seed", "1", "--out", path("nell")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cs = actlogic::load_constraint_config(path("nell.constraints.json"));
  const auto d = actlogic::load_sparse_labels(path("nell.features"), path("nell.labels"), cs);
  EXPECT_EQ(d.num_instances(), 500u);
  EXPECT_EQ(d.num_labels(), 13u);
}

TEST_F(CliTest, ValidatePrintsSummary) {
  ASSERT_EQ(cli({"synth", "--profile", "nell13", "--n", "50", "--seed", "2", "--out", path("nell")}).code, 0);
  const auto r = cli({"validate", "--dataset", path("nell.features"), "--format", "sparse", "--labels",
                      path("nell.labels"), "--constraints", ACTLOGIC_SOURCE_DIR "/configs/nell13.json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("labels: 13"), std::string::npos);
  EXPECT_NE(r.out.find("instances: 50"), std::string::npos);
  EXPECT_NE(r.out.find("consistent: yes"), std::string::npos);
}

TEST_F(CliTest, ViolatingDatasetExitsWithRuntimeError) {
  std::ofstream(path("f.txt")) << "np0 1:1\nnp1 2:1\n";
  std::ofstream(path("l.txt")) << "np0 animal 1\nnp1 city 1\n";
  const auto r = cli({"run", "--dataset", path("f.txt"), "--format", "sparse", "--labels", path("l.txt"),
                      "--constraints", ACTLOGIC_SOURCE_DIR "/configs/nell13.json", "--method", "entropy", "--out",
                      path("m.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("np1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("subsumption(artificial_location > city)"), std::string::npos) << r.err;
}

TEST_F(CliTest, RunWritesMetricsAndReplayableManifest) {
  ASSERT_EQ(cli({"synth", "--profile", "segment", "--n", "280", "--seed", "3", "--out", path("seg")}).code, 0);
  const auto r = cli({"run", "--dataset", path("seg.svm"), "--format", "libsvm", "--constraints",
                      ACTLOGIC_SOURCE_DIR "/configs/me_only.json", "--method", "probability-cp", "--per-iter", "20",
                      "--train-count", "40", "--seed", "42", "--out", path("m.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("m.csv"));
  EXPECT_EQ(csv.rfind("iteration,average_auc,labels_requested,labels_fixed,wall_ms\n", 0), 0u);
  EXPECT_NE(csv.find("# iterations_to_target="), std::string::npos);

  const auto manifest = nlohmann::json::parse(slurp(path("m.csv.manifest.json")));
  EXPECT_EQ(manifest["config"]["method"], "probability-cp");
  EXPECT_EQ(manifest["config"]["per_iteration"], 20);
  EXPECT_EQ(manifest["config"]["split"]["train_count"], 40);
  EXPECT_EQ(manifest["config"]["seed"], 42);

  const auto replay = cli({"run", "--manifest", path("m.csv.manifest.json"), "--out", path("again.csv")});
  ASSERT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(mask_wall_ms(slurp(path("again.csv"))), mask_wall_ms(csv));

  // flags override manifest values
  const auto over = cli({"run", "--manifest", path("m.csv.manifest.json"), "--per-iter", "30", "--out", path("o.csv")});
  ASSERT_EQ(over.code, 0) << over.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(path("o.csv.manifest.json")))["config"]["per_iteration"], 30);
}

TEST_F(CliTest, CompareWritesCombinedCsvAndCharts) {
  ASSERT_EQ(cli({"synth", "--profile", "nell13", "--n", "120", "--seed", "4", "--out", path("nell")}).code, 0);
  std::vector<std::string> base = {"compare", "--dataset", path("nell.features"), "--format", "sparse", "--labels",
                                   path("nell.labels"), "--constraints", path("nell.constraints.json"),
                                   "--train-count", "16", "--per-iter", "20", "--seed", "9", "--methods",
                                   "random,entropy,random-cp,entropy-cp,probability-cp,log-cp,linear-cp"};
  auto first = base;
  first.insert(first.end(), {"--out", path("cmp.csv")});
  auto second = base;
  second.insert(second.end(), {"--out", path("cmp2.csv")});
  const auto r1 = cli(first);
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(cli(second).code, 0);
  const auto csv = slurp(path("cmp.csv"));
  for (auto name : actlogic::kMethodNames)
    EXPECT_NE(csv.find("\n" + std::string(name) + ","), std::string::npos) << name;
  EXPECT_EQ(mask_wall_ms(csv), mask_wall_ms(slurp(path("cmp2.csv"))));
  EXPECT_NE(slurp(path("cmp.auc.svg")).find("<svg"), std::string::npos);
  EXPECT_NE(slurp(path("cmp.iterations.svg")).find("<svg"), std::string::npos);

  auto single = base;
  single.back() = "entropy";
  single.insert(single.end(), {"--out", path("one.csv")});
  EXPECT_EQ(cli(single).code, 1);
}

TEST_F(CliTest, OracleCheckReportsMatches) {
  const auto r = cli({"oracle-check", "--k", "5", "--trials", "1000"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1000/1000 rankings match\n");
  EXPECT_EQ(cli({"oracle", "check", "--k", "3", "--trials", "5"}).out, "5/5 rankings match\n");
}
