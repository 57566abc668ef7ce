#include "bingham_dg/cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bdg;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream f(p);
  return nlohmann::json::parse(f);
}

}  // namespace

TEST(Cli, DamBreakSmokeRun) {
  const fs::path d = fresh_dir("bdg_cli_dam");
  // shortened horizon of the documented example; same flags otherwise
  const CliRun r = run({"--benchmark", "dam-break", "--nel", "100", "--dt", "1e-5", "--tfinal",
                        "0.002", "--reg", "1", "--gamma", "1e2", "--beta", "1e2",
                        "--snapshot-every", "100", "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(d / "summary.json"));
  for (const char* f : {"snapshot_000000.csv", "snapshot_000100.csv", "snapshot_000200.csv"}) {
    EXPECT_TRUE(fs::exists(d / f)) << f;
  }
  const auto rows = read_snapshot(d / "snapshot_000200.csv");
  EXPECT_EQ(rows.size(), 100u * 3u);
  for (const Sample& s : rows) EXPECT_GT(s.h, 0.0);
  const auto j = read_json(d / "summary.json");
  for (const char* k : {"L2_h", "L2_u", "Linf_h", "Linf_u", "active_pct", "nr_per_step",
                        "cpu_seconds"}) {
    EXPECT_TRUE(j["report"].contains(k)) << k;
  }
  EXPECT_EQ(j["config"]["benchmark"], "dam-break");
  EXPECT_EQ(j["config"]["orders"], nlohmann::json({1, 1, 1, 0}));
  EXPECT_EQ(j["run"]["steps"], 200);
  EXPECT_GE(j["report"]["active_pct"].get<double>(), 0.0);
  EXPECT_LE(j["report"]["active_pct"].get<double>(), 100.0);
}

TEST(Cli, ConstantFreeSurfaceWellBalanced) {
  const fs::path d = fresh_dir("bdg_cli_cfs");
  const CliRun r = run({"--benchmark", "constant-free-surface", "--orders", "1,1,1,1", "--tfinal",
                        "0.1", "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = read_json(d / "summary.json");
  EXPECT_LE(j["report"]["Linf_h"].get<double>(), 1e-13);
  EXPECT_EQ(j["report"]["Linf_u"].get<double>(), 0.0);
}

TEST(Cli, ConfigFileWithOverride) {
  const fs::path d = fresh_dir("bdg_cli_cfg");
  fs::create_directories(d);
  {
    std::ofstream f(d / "run.ini");
    f << "[benchmark]\nname = constant-free-surface\nn_el = 20\nt_final = 0.05\n"
      << "[output]\ndir = " << (d / "a").string() << "\n";
  }
  const CliRun r = run({"--config", (d / "run.ini").string(), "--nel", "30"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = read_json(d / "a" / "summary.json");
  EXPECT_EQ(j["config"]["n_el"], 30);
  EXPECT_EQ(j["config"]["t_final"], 0.05);
}

TEST(Cli, MissingBenchmarkIsConfigError) {
  const CliRun r = run({"--nel", "10"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("--benchmark"), std::string::npos);
}

TEST(Cli, UnknownBenchmark) {
  const CliRun r = run({"--benchmark", "tsunami", "--out", fresh_dir("bdg_cli_x").string()});
  EXPECT_EQ(r.code, kExitUnknownBenchmark);
}

TEST(Cli, MalformedValues) {
  EXPECT_EQ(run({"--benchmark", "dam-break", "--dt", "abc"}).code, kExitConfig);
  EXPECT_EQ(run({"--benchmark", "dam-break", "--reg", "4"}).code, kExitConfig);
  EXPECT_EQ(run({"--benchmark", "dam-break", "--continuation", "100"}).code, kExitConfig);
  EXPECT_EQ(run({"--benchmark", "dam-break", "--bogus", "1"}).code, kExitConfig);
  EXPECT_EQ(run({"--config", "/nonexistent/file.ini"}).code, kExitConfig);
}

TEST(Cli, SolverFailure) {
  const fs::path d = fresh_dir("bdg_cli_fail");
  // nearly dry downstream: the first Newton update undershoots to negative depth
  fs::create_directories(d);
  const fs::path ini = d / "dry.ini";
  std::ofstream(ini) << "[benchmark]\nname = dam-break\nn_el = 20\ndt = 1e-3\n"
                     << "[geometry]\nh2 = 1e-3\n";
  const CliRun r = run({"--config", ini.string(), "--out", d.string()});
  EXPECT_EQ(r.code, kExitSolver) << r.out << r.err;
  const auto j = read_json(d / "summary.json");
  EXPECT_FALSE(j["run"]["failure"].is_null());
}

TEST(Cli, UnwritableOutput) {
  const CliRun r = run({"--benchmark", "dam-break", "--tfinal", "1e-5", "--out",
                        "/proc/bdg_cannot_create"});
  EXPECT_EQ(r.code, kExitIo);
}

TEST(Cli, Help) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--continuation"), std::string::npos);
}
