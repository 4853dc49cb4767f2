#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cli/commands.hpp"

using namespace multisym::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("multisym_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv(kOutputDirEnv);
  }
  void TearDown() override {
    unsetenv(kOutputDirEnv);
    fs::remove_all(dir_);
  }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path;
  }

  int run_in_process(const std::string& command, const fs::path& config, const fs::path& out) {
    std::ostringstream log;
    return run(command, config, out, log);
  }

  static json read_json(const fs::path& path) {
    std::ifstream in(path);
    return json::parse(in);
  }

  static const json& check(const json& report, const std::string& name) {
    for (const auto& c : report["checks"]) {
      if (c["name"] == name) return c;
    }
    throw std::runtime_error("no check named " + name);
  }

  fs::path dir_;
};

int exit_status(const std::string& command) {
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_F(CliTest, ParseDefaultsAndNestedUnknownKeys) {
  const RunConfig c = parse_config(json::parse(R"({"lagrangian": {"name": "area"}})"));
  EXPECT_EQ(c.lagrangian.n, 3);
  EXPECT_EQ(c.lagrangian.p, 2);
  EXPECT_EQ(c.suites, all_suites());
  EXPECT_EQ(c.count, 500);

  EXPECT_THROW(parse_config(json::parse(R"({"lagrangian": {"name": "area", "q": 1}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"lagrangian": {"name": "area"}, "tolerances": {"eulr": 1}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(
                   R"({"lagrangian": {"name": "area"}, "surface": {"kind": "flat", "domian": {}}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"lagrangian": {"name": "nope"}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(
                   R"({"lagrangian": {"name": "ellipsoid", "params": {"weights": [1, -1, 1]}}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"lagrangian": {"name": "area", "n": 3, "p": 3}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"lagrangian": {"name": "area"}, "suites": ["euler", "x"]})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(
                   R"({"lagrangian": {"name": "area", "n": 4}, "surface": {"kind": "bilinear"}})")),
               ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"lagrangian": {"name": "area"}, "seed": -1})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"([1, 2])")), ConfigError);
}

TEST_F(CliTest, VerifyAreaPasses) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area", "n": 3, "p": 2}})");
  EXPECT_EQ(run_in_process("verify", cfg, dir_ / "r.json"), kExitPass);
  const json r = read_json(dir_ / "r.json");
  EXPECT_EQ(r["overall"], "pass");
  EXPECT_EQ(r["command"], "verify");
  EXPECT_EQ(r["config"]["lagrangian"]["name"], "area");
  for (const auto& c : r["checks"]) {
    EXPECT_EQ(c["status"], "pass") << c["name"];
    for (const char* key : {"name", "anchor", "status", "residual", "tolerance", "runtime_ms"}) {
      EXPECT_TRUE(c.contains(key)) << key;
    }
  }
}

TEST_F(CliTest, VerifyNonconvexProbeFailsConvexity) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "geometric_mean"},
                                             "suites": ["euler", "convexity"]})");
  EXPECT_EQ(run_in_process("verify", cfg, dir_ / "r.json"), kExitCheckFailure);
  const json r = read_json(dir_ / "r.json");
  EXPECT_EQ(r["overall"], "fail");
  EXPECT_EQ(check(r, "euler_formula")["status"], "pass");
  const json& convexity = check(r, "convexity_certificate");
  EXPECT_EQ(convexity["status"], "fail");
  EXPECT_NE(convexity["anchor"].get<std::string>().find("convex"), std::string::npos);
}

TEST_F(CliTest, VerifyLinearProbeIsDegenerateButSatisfiesRankLemma) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "projected_volume"},
                                             "suites": ["rank_lemma", "nondegeneracy"]})");
  EXPECT_EQ(run_in_process("verify", cfg, dir_ / "r.json"), kExitCheckFailure);
  const json r = read_json(dir_ / "r.json");
  EXPECT_EQ(check(r, "rank_lemma")["status"], "pass");
  EXPECT_EQ(check(r, "nondegenerate_lagrangian")["status"], "fail");
}

TEST_F(CliTest, VerifyIsDeterministicModuloTiming) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "ellipsoid", "n": 4, "p": 2,
                                             "params": {"weights": [1, 2, 3, 4, 5, 6]}}, "seed": 99})");
  ASSERT_EQ(run_in_process("verify", cfg, dir_ / "a.json"), kExitPass);
  ASSERT_EQ(run_in_process("verify", cfg, dir_ / "b.json"), kExitPass);
  EXPECT_EQ(without_timing(read_json(dir_ / "a.json")).dump(2),
            without_timing(read_json(dir_ / "b.json")).dump(2));
}

TEST_F(CliTest, ActionPlaneGivesSqrt14ThreeWays) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area"},
      "surface": {"kind": "plane", "a": 2, "b": 3, "resolutions": [64]},
      "density": "slope_norm"})");
  EXPECT_EQ(run_in_process("action", cfg, dir_ / "r.json"), kExitPass);
  const json r = read_json(dir_ / "r.json");
  for (const char* kind : {"lagrangian", "multisymplectic", "graph"}) {
    EXPECT_NEAR(r["results"][kind][0].get<double>(), std::sqrt(14.0), 1e-8) << kind;
  }
}

TEST_F(CliTest, ActionFlatGraphIsOne) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "graph_lift", "params": {"density": "area"}},
      "surface": {"kind": "flat", "resolutions": [8]}})");
  EXPECT_EQ(run_in_process("action", cfg, dir_ / "r.json"), kExitPass);
  const json r = read_json(dir_ / "r.json");
  for (const char* kind : {"lagrangian", "multisymplectic", "graph"}) {
    EXPECT_NEAR(r["results"][kind][0].get<double>(), 1.0, 1e-14) << kind;
  }
}

TEST_F(CliTest, ActionBilinearConvergenceOrder) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area"},
      "surface": {"kind": "bilinear", "resolutions": [16, 32, 64, 128, 256]},
      "expected_order": 2.0})");
  EXPECT_EQ(run_in_process("action", cfg, dir_ / "r.json"), kExitPass);
  const json r = read_json(dir_ / "r.json");
  EXPECT_EQ(check(r, "convergence_order")["status"], "pass");
  EXPECT_TRUE(r["results"]["convergence"]["monotone"].get<bool>());
}

TEST_F(CliTest, ActionPolynomialSurfaceAgreesAcrossActions) {
  // f(x1, x2) = x1^2 + x2: interpolant tangents differ from the exact graph
  // derivative by O(h^2), so the graph action only agrees at that rate.
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "graph_lift"},
      "surface": {"kind": "polynomial",
                  "components": [[{"coefficient": 1, "exponents": [2, 0]},
                                  {"coefficient": 1, "exponents": [0, 1]}]],
                  "resolutions": [32, 64]},
      "quadrature": "gauss2",
      "tolerances": {"graph": 1e-4}})");
  EXPECT_EQ(run_in_process("action", cfg, dir_ / "r.json"), kExitPass);
  const json r = read_json(dir_ / "r.json");
  double gap[2];
  for (int i = 0; i < 2; ++i) {
    const double lag = r["results"]["lagrangian"][i].get<double>();
    EXPECT_NEAR(r["results"]["multisymplectic"][i].get<double>(), lag, 1e-10 * lag);
    gap[i] = std::abs(r["results"]["graph"][i].get<double>() - lag);
  }
  EXPECT_NEAR(std::log2(gap[0] / gap[1]), 2.0, 0.3);
}

TEST_F(CliTest, ActionWithoutSurfaceIsUsageError) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area"}})");
  EXPECT_EQ(run_in_process("action", cfg, dir_ / "r.json"), kExitUsage);
  EXPECT_FALSE(fs::exists(dir_ / "r.json"));
}

TEST_F(CliTest, ImageWritesCsvOnUnitSphere) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area"}, "count": 500, "seed": 3})");
  EXPECT_EQ(run_in_process("image", cfg, dir_ / "img.json"), kExitPass);
  std::ifstream csv(dir_ / "img.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x1,x2,x3,p12,p13,p23");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 6u);
    EXPECT_NEAR(std::sqrt(v[3] * v[3] + v[4] * v[4] + v[5] * v[5]), 1.0, 1e-10);
    ++rows;
  }
  EXPECT_EQ(rows, 500);
}

TEST_F(CliTest, ImageEllipsoidQuadricAndEmptyCount) {
  auto cfg = write_config("c.json", R"({"lagrangian": {"name": "ellipsoid", "params": {"weights": [1, 4, 9]}},
      "count": 200})");
  EXPECT_EQ(run_in_process("image", cfg, dir_ / "e.json"), kExitPass);
  EXPECT_EQ(check(read_json(dir_ / "e.json"), "image_quadric")["status"], "pass");

  cfg = write_config("z.json", R"({"lagrangian": {"name": "area"}, "count": 0, "csv": "empty.csv"})");
  EXPECT_EQ(run_in_process("image", cfg, dir_ / "z_report.json"), kExitPass);
  std::ifstream csv(fs::current_path() / "empty.csv");
  std::stringstream content;
  content << csv.rdbuf();
  EXPECT_EQ(content.str(), "x1,x2,x3,p12,p13,p23\n");
  fs::remove(fs::current_path() / "empty.csv");
}

TEST_F(CliTest, ImageIsByteIdenticalAcrossRuns) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area", "n": 4, "p": 2}, "count": 50})");
  ASSERT_EQ(run_in_process("image", cfg, dir_ / "a.json"), kExitPass);
  ASSERT_EQ(run_in_process("image", cfg, dir_ / "b.json"), kExitPass);
  std::ifstream a(dir_ / "a.csv"), b(dir_ / "b.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
}

TEST_F(CliTest, OutputDirectoryOverride) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area"}, "count": 5})");
  const fs::path other = dir_ / "elsewhere";
  fs::create_directories(other);
  setenv(kOutputDirEnv, other.c_str(), 1);
  EXPECT_EQ(run_in_process("image", cfg, "/does/not/matter/report.json"), kExitPass);
  EXPECT_TRUE(fs::exists(other / "report.json"));
  EXPECT_TRUE(fs::exists(other / "report.csv"));
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
  const auto cfg = write_config("c.json", R"({"lagrangian": {"name": "area"}, "count": 5})");
  EXPECT_EQ(run_in_process("image", cfg, dir_ / "missing" / "r.json"), kExitIo);
  EXPECT_EQ(run_in_process("verify", cfg, dir_ / "missing" / "r.json"), kExitIo);
}

TEST_F(CliTest, ExecutableExitCodes) {
  const std::string exe = MULTISYM_EXE;
  const auto good = write_config("good.json", R"({"lagrangian": {"name": "area"}})");
  const auto bad = write_config("bad.json", R"({"lagrangian": )");
  const auto probe = write_config("probe.json", R"({"lagrangian": {"name": "geometric_mean"}})");
  const std::string quiet = " 2>/dev/null";
  EXPECT_EQ(exit_status(exe + " verify --config " + good.string() + " --out " + (dir_ / "g.json").string() + quiet), 0);
  EXPECT_EQ(exit_status(exe + " verify --config " + probe.string() + " --out " + (dir_ / "p.json").string() + quiet), 1);
  EXPECT_EQ(exit_status(exe + " verify --config " + bad.string() + " --out " + (dir_ / "b.json").string() + quiet), 2);
  EXPECT_FALSE(fs::exists(dir_ / "b.json"));
  EXPECT_EQ(exit_status(exe + " verify --config " + good.string() + quiet + " >/dev/null"), 2);
  EXPECT_EQ(exit_status(exe + " frobnicate" + quiet + " >/dev/null"), 2);
  EXPECT_EQ(exit_status(exe + " image --config " + good.string() + " --out /nonexistent/x/r.json" + quiet), 3);
}
