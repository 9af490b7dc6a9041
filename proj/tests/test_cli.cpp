#include "frontsim/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace frontsim;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("frontsim_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] const fs::path& path() const { return path_; }
  [[nodiscard]] std::string str(const std::string& sub = "") const { return (path_ / sub).string(); }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kMinimal = R"(# comment
[model]
a0 = 1
alpha = 1
beta = 1
gamma = 1
s0 = 1   # trailing comment
T = 1

[drive]
values = 1

[initial]
values = 1
)";

int error_line(const std::string& text) {
  try {
    parse_config(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, ParsesMinimalFileWithDefaults) {
  const ConfigFile c = parse_config(kMinimal);
  EXPECT_EQ(c.params, (ModelParams{1.0, 1.0, 1.0, 1.0, 1.0, 1.0}));
  EXPECT_TRUE(c.drive.is_constant());
  EXPECT_EQ(c.run.stop_time, 1.0);
  EXPECT_EQ(c.output_dir, "out");
  EXPECT_TRUE(c.sweep.empty());
}

TEST(Config, RoundTripsEveryPreset) {
  for (const std::string& name : preset_names()) {
    const ConfigFile c = preset(name);
    if (name == "invalid-s0") continue;  // not parseable by design
    EXPECT_EQ(parse_config(serialize_config(c)), c) << name;
  }
}

TEST(Config, RoundTripsRandomConfigs) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(0.01, 3.0);
  for (int i = 0; i < 100; ++i) {
    ConfigFile c;
    c.params = {d(rng), d(rng), d(rng), d(rng), d(rng), 2.0};
    c.drive = BoundaryDrive({0.0, d(rng)}, {d(rng), d(rng)});
    c.u0.values = {d(rng), d(rng), d(rng)};
    c.run.mode = i % 2 ? RunMode::Picard : RunMode::Sequential;
    c.run.N = 10 + i;
    c.run.dt = 0.01;
    c.run.stop_time = 1.0;
    c.run.window = d(rng);
    c.run.picard_tol = d(rng) * 1e-9;
    if (i % 3 == 0) c.run.epsilon = d(rng);
    c.output_dir = "dir_" + std::to_string(i);
    if (i % 4 == 0) c.sweep = {{"model.beta", {d(rng), d(rng)}}, {"run.N", {20, 40}}};
    EXPECT_EQ(parse_config(serialize_config(c)), c);
  }
}

TEST(Config, DiagnosticsAreLineAnchored) {
  std::string bad = kMinimal;
  bad.replace(bad.find("s0 = 1"), 6, "s0 = 0");
  EXPECT_EQ(error_line(bad), 7);
  try {
    parse_config(bad, "test.cfg");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("test.cfg:7:"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("s_0>0"), std::string::npos);
  }
  EXPECT_EQ(error_line(std::string(kMinimal) + "[run]\nbogus = 1\n"), 16);
  EXPECT_EQ(error_line(std::string(kMinimal) + "[run]\nN = ten\n"), 16);
  EXPECT_EQ(error_line(std::string(kMinimal) + "[model]\n"), 15);
  EXPECT_EQ(error_line("a0 = 1\n"), 1);
  EXPECT_EQ(error_line("[model]\na0 = 1\na0 = 2\n"), 3);
  EXPECT_EQ(error_line(std::string(kMinimal) + "[sweep]\nmodel.zeta = 1, 2\n"), 16);
  EXPECT_EQ(error_line(std::string(kMinimal) + "[run]\ndt = 0.3\n"), 15);
}

TEST(Config, OverridesAndUnknownKeys) {
  ConfigFile c = parse_config(kMinimal);
  apply_override(c, "model.alpha", 0.25);
  apply_override(c, "run.N", 64);
  apply_override(c, "drive.b", 2.0);
  EXPECT_EQ(c.params.alpha, 0.25);
  EXPECT_EQ(c.run.N, 64);
  EXPECT_EQ(c.drive.value(0.3), 2.0);
  EXPECT_THROW(apply_override(c, "model.zeta", 1.0), InvalidInput);
}

TEST(Sweep, CartesianProductFirstAxisSlowest) {
  const auto pts = cli::sweep_points({{"a", {1, 2, 3}}, {"b", {10, 20, 30}}});
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_EQ(pts[0], (std::vector<double>{1, 10}));
  EXPECT_EQ(pts[1], (std::vector<double>{1, 20}));
  EXPECT_EQ(pts[8], (std::vector<double>{3, 30}));
  EXPECT_EQ(cli::sweep_points({}).size(), 1u);
}

TEST(CmdRun, EquilibriumPreset) {
  TempDir dir;
  cli::Options o;
  o.preset = "equilibrium";
  o.out_dir = dir.str("eq");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_run(o, out, err), cli::kExitOk);
  const auto ts = lines(read_file(dir.path() / "eq" / "timeseries.csv"));
  ASSERT_EQ(ts.size(), 1003u);
  EXPECT_EQ(ts[0], cli::kTimeseriesVersion);
  EXPECT_EQ(ts[1], "t,s,s_t,u_0,u_1,min_u,max_u,energy_E,weak_residual_max,u_star_bound,M_front_bound");
  const std::string summary = read_file(dir.path() / "eq" / "summary.txt");
  EXPECT_NE(summary.find("status = completed"), std::string::npos);
  const auto pos = summary.find("final_s = ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(summary.substr(pos + 10)), 1.0, 1e-6);
  EXPECT_TRUE(fs::exists(dir.path() / "eq" / "invariants.csv"));
}

TEST(CmdRun, ExitCodes) {
  TempDir dir;
  std::ostringstream out, err;
  cli::Options o;
  o.out_dir = dir.str("x");
  o.preset = "invalid-s0";
  EXPECT_EQ(cli::cmd_run(o, out, err), cli::kExitConfig);
  EXPECT_NE(err.str().find("s_0>0"), std::string::npos);
  o.preset = "collapse";
  EXPECT_EQ(cli::cmd_run(o, out, err), cli::kExitCollapse);
  o.preset = "no-such-preset";
  EXPECT_EQ(cli::cmd_run(o, out, err), cli::kExitConfig);
  o.preset.clear();
  o.config_path = dir.str("missing.cfg");
  EXPECT_EQ(cli::cmd_run(o, out, err), cli::kExitConfig);

  std::ofstream(dir.path() / "picard.cfg")
      << kMinimal << "[run]\nmode = picard\ndt = 0.01\npicard_max_iters = 1\npicard_tol = 1e-15\n";
  o.config_path = dir.str("picard.cfg");
  EXPECT_EQ(cli::cmd_run(o, out, err), cli::kExitPicard);

  EXPECT_EQ(cli::exit_code_for(RunStatus::InvariantViolation), cli::kExitInvariant);
  EXPECT_EQ(cli::exit_code_for(RunStatus::Completed), cli::kExitOk);
}

TEST(CmdRun, OutputDirectoryPrecedence) {
  TempDir dir;
  const std::string cfg = dir.str("c.cfg");
  std::ofstream(cfg) << kMinimal << "[run]\ndt = 0.1\n[output]\ndir = " << dir.str("from_config") << "\n";
  cli::Options o;
  o.config_path = cfg;
  std::ostringstream out, err;

  ::unsetenv(cli::kOutDirEnv);
  ASSERT_EQ(cli::cmd_run(o, out, err), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "from_config" / "summary.txt"));

  ::setenv(cli::kOutDirEnv, dir.str("from_env").c_str(), 1);
  ASSERT_EQ(cli::cmd_run(o, out, err), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "from_env" / "summary.txt"));

  o.out_dir = dir.str("from_flag");
  ASSERT_EQ(cli::cmd_run(o, out, err), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "from_flag" / "summary.txt"));
  ::unsetenv(cli::kOutDirEnv);
}

TEST(CmdRun, ArtifactsAreDeterministic) {
  TempDir dir;
  std::ostringstream out, err;
  cli::Options o;
  o.preset = "generic-picard";
  for (const char* sub : {"a", "b"}) {
    o.out_dir = dir.str(sub);
    ASSERT_EQ(cli::cmd_run(o, out, err), 0);
  }
  for (const char* f : {"timeseries.csv", "invariants.csv", "summary.txt", "picard.csv"})
    EXPECT_EQ(read_file(dir.path() / "a" / f), read_file(dir.path() / "b" / f)) << f;
}

TEST(CmdSweep, AlphaAxisApproachesEquilibria) {
  TempDir dir;
  cli::Options o;
  o.preset = "sweep-alpha";
  o.out_dir = dir.str();
  o.parallel = 3;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_sweep(o, out, err), cli::kExitOk);
  const auto rows = lines(read_file(dir.path() / "sweep.csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "point,model.alpha,final_s,max_s,M_front,status");
  const double expected[] = {2.0, 1.0, 0.5};
  for (int i = 0; i < 3; ++i) {
    std::istringstream r(rows[i + 1]);
    std::string point, alpha, final_s;
    std::getline(r, point, ',');
    std::getline(r, alpha, ',');
    std::getline(r, final_s, ',');
    EXPECT_NEAR(std::stod(final_s), expected[i], 0.02 * expected[i]);
    EXPECT_NE(rows[i + 1].find("completed"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir.path() / ("point_00" + std::to_string(i)) / "timeseries.csv"));
  }
}

TEST(CmdSweep, NinePointsInAxisOrder) {
  TempDir dir;
  const std::string cfg = dir.str("s.cfg");
  std::ofstream(cfg) << kMinimal << "[run]\ndt = 0.05\nN = 20\n[sweep]\nmodel.beta = 1, 2, 3\ndrive.b = 0.5, 1, 1.5\n";
  cli::Options o;
  o.config_path = cfg;
  o.out_dir = dir.str("out");
  o.parallel = 2;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_sweep(o, out, err), 0);
  const std::string first = read_file(dir.path() / "out" / "sweep.csv");
  const auto rows = lines(first);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[1].substr(0, 8), "0,1,0.5,");
  EXPECT_EQ(rows[9].substr(0, 8), "8,3,1.5,");
  o.parallel = 1;
  ASSERT_EQ(cli::cmd_sweep(o, out, err), 0);
  EXPECT_EQ(read_file(dir.path() / "out" / "sweep.csv"), first);
}

TEST(CmdSweep, EmptyAxesBehaveAsRun) {
  TempDir dir;
  cli::Options o;
  o.preset = "equilibrium";
  o.out_dir = dir.str();
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_sweep(o, out, err), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "timeseries.csv"));
  EXPECT_FALSE(fs::exists(dir.path() / "sweep.csv"));
}

TEST(CmdVerify, UnknownSuiteIsAConfigError) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_verify("nope", {}, out, err), cli::kExitConfig);
  EXPECT_THROW(cli::run_suite("nope"), InvalidInput);
}

TEST(CmdVerify, BoundsSuitePasses) {
  TempDir dir;
  cli::Options o;
  o.out_dir = dir.str();
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_verify("bounds", o, out, err), cli::kExitOk);
  const std::string table = read_file(dir.path() / "verify_bounds" / "bounds.csv");
  EXPECT_NE(table.find("equilibrium,"), std::string::npos);
}
