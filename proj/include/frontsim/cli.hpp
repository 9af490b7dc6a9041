#pragma once

#include "frontsim/config.hpp"
#include "frontsim/coupler.hpp"
#include "frontsim/verify.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace frontsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInvariant = 2;
inline constexpr int kExitCollapse = 3;
inline constexpr int kExitPicard = 4;
inline constexpr int kExitStudy = 5;

/// Environment variable overriding the output directory (below --out).
inline constexpr const char* kOutDirEnv = "FRONTSIM_OUT_DIR";

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  int parallel = 1;
};

int exit_code_for(RunStatus status);

/// Loads --config or --preset (exactly one) and applies the output-dir
/// precedence --out > FRONTSIM_OUT_DIR > [output] dir.
ConfigFile resolve_config(const Options& opts);

/// Header line of timeseries.csv; bump the version on any column change.
inline constexpr const char* kTimeseriesVersion = "# frontsim timeseries v1";
inline constexpr const char* kInvariantsVersion = "# frontsim invariants v1";

std::string timeseries_csv(const RunResult& result);
std::string invariants_csv(const RunResult& result);
std::string picard_csv(const RunResult& result);
std::string summary_text(const RunResult& result);

/// Writes timeseries.csv, invariants.csv, summary.txt (and picard.csv for
/// Picard runs) into dir.
void write_artifacts(const RunResult& result, const std::string& dir);

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& suite, const Options& opts, std::ostream& out,
               std::ostream& err);

/// Cartesian product of the sweep axes, first axis slowest.
std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis>& axes);

struct SuiteOutcome {
  bool passed = false;
  std::string table;  // CSV
  std::string report;  // human-readable lines
};

std::vector<std::string> suite_names();
/// Runs one named verification study; throws InvalidInput on unknown names.
SuiteOutcome run_suite(const std::string& suite);

}  // namespace frontsim::cli
