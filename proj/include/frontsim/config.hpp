#pragma once

#include "frontsim/coupler.hpp"
#include "frontsim/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frontsim {

/// Parse or validation failure, formatted as "<source>:<line>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);

  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

/// One sweep dimension, e.g. key "model.alpha" with values {0.5, 1, 2}.
struct SweepAxis {
  std::string key;
  std::vector<double> values;

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

/// Everything a run or sweep needs. Text format (sections and keys):
///
///   [model]   a0 alpha beta gamma s0 T
///   [drive]   times = t0, t1, ...   values = b0, b1, ...
///   [initial] values = u0 samples on [0, s0]
///   [run]     mode N dt stop_time window picard_tol picard_max_iters epsilon
///   [output]  dir
///   [sweep]   <section>.<key> = v1, v2, ...
///
/// '#' starts a comment. Numbers are written with 17 significant digits so
/// that serialize/parse round-trips exactly.
struct ConfigFile {
  ModelParams params;
  BoundaryDrive drive;
  InitialProfile u0;
  RunConfig run;
  std::string output_dir = "out";
  std::vector<SweepAxis> sweep;

  friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

ConfigFile parse_config(std::string_view text, const std::string& source = "config");
ConfigFile load_config(const std::string& path);
std::string serialize_config(const ConfigFile& config);

/// Sets a scalar "<section>.<key>" (model.*, run.N/dt/stop_time/window/
/// picard_tol/picard_max_iters/epsilon, drive.b for a constant drive,
/// initial.u0 for a constant profile). Throws InvalidInput on unknown keys.
void apply_override(ConfigFile& config, const std::string& key, double value);

/// Validates the assembled object without line information.
void validate_config(const ConfigFile& config);

/// Built-in configurations addressable by --preset.
std::vector<std::string> preset_names();
ConfigFile preset(const std::string& name);

/// Fixed 17-significant-digit formatting ("%.17g"); lossless for doubles.
std::string format_number(double x);

}  // namespace frontsim
