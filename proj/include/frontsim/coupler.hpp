#pragma once

#include "frontsim/bounds.hpp"
#include "frontsim/freeboundary.hpp"
#include "frontsim/model.hpp"
#include "frontsim/pde.hpp"

#include <optional>
#include <string>
#include <vector>

namespace frontsim {

enum class RunMode { Sequential, Picard };

struct RunConfig {
  RunMode mode = RunMode::Sequential;
  Eigen::Index N = 200;
  double dt = 1e-3;
  double stop_time = 1.0;
  // Picard only.
  double window = 0.1;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  /// Mollifier width for the AP2_eps inner solve; unset means direct AP1.
  std::optional<double> epsilon;

  /// Number of uniform steps; throws InvalidInput unless stop_time is a
  /// multiple of dt.
  [[nodiscard]] Eigen::Index steps() const;
  [[nodiscard]] Eigen::Index window_steps() const;
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Hard tolerances of the runtime monitors.
struct MonitorTolerances {
  double lower = 1e-8;     // min u >= -lower * u*
  double upper = 1e-8;     // max u <= u* (1 + upper)
  double residual = 1e-9;  // relative weak residual
  double front = 1e-10;    // s <= M_front (1 + front)
};

/// Per-state record of the monitored quantities.
struct InvariantRecord {
  double t = 0.0;
  double s = 0.0;
  double s_t = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double max_s = 0.0;
  double u_star = 0.0;   // max(alpha max_{tau<=t} s, b*/gamma)
  double M_front = 0.0;  // +inf when alpha = 0
  double energy = 0.0;
  double residual_max = 0.0;
  double residual_relative = 0.0;
  bool lower_ok = true;
  bool upper_ok = true;
  bool residual_ok = true;
  bool front_ok = true;

  [[nodiscard]] bool ok() const { return lower_ok && upper_ok && residual_ok && front_ok; }
};

enum class RunStatus { Completed, FrontCollapse, PicardFailure, InvariantViolation };

const char* to_string(RunStatus status);

/// Iteration history of one Picard window attempt.
struct PicardWindowLog {
  double t_start = 0.0;
  Eigen::Index steps = 0;
  std::vector<double> distances;
  bool converged = false;
};

struct RunResult {
  std::vector<SimState> states;
  std::vector<InvariantRecord> report;
  RunStatus status = RunStatus::Completed;
  std::string message;
  std::vector<PicardWindowLog> picard_log;
  bool energy_growth_warning = false;
  double b_star = 0.0;

  [[nodiscard]] double max_s() const;
  [[nodiscard]] const SimState& final_state() const { return states.back(); }
};

RunResult run_sequential(const ModelParams& params, const BoundaryDrive& drive,
                         const InitialProfile& u0, const RunConfig& config,
                         const MonitorTolerances& tol = {});

RunResult run_picard(const ModelParams& params, const BoundaryDrive& drive,
                     const InitialProfile& u0, const RunConfig& config,
                     const MonitorTolerances& tol = {});

/// Dispatches on config.mode.
RunResult run(const ModelParams& params, const BoundaryDrive& drive,
              const InitialProfile& u0, const RunConfig& config,
              const MonitorTolerances& tol = {});

struct WindowSolution {
  std::vector<SimState> states;  // includes the initial state
  BoundaryTrace trace;
  std::vector<ResidualSummary> residuals;  // one per step
};

/// Marches the AP1 problem against a frozen front trajectory.
WindowSolution solve_ap1_window(const FrontTrajectory& s_traj,
                                const ModelParams& params,
                                const BoundaryDrive& drive,
                                const SimState& u_init);

struct InnerIterationOptions {
  double tol = 1e-12;
  int max_iterations = 200;
};

/// AP2_eps against a frozen trajectory: the frozen trace is
/// sigma(rho_eps * eta) with eta iterated to a fixed point (eta = u(., 1)).
WindowSolution solve_ap2_eps_window(const FrontTrajectory& s_traj,
                                    const ModelParams& params,
                                    const BoundaryDrive& drive,
                                    const SimState& u_init, double epsilon,
                                    const InnerIterationOptions& opts = {});

/// Contraction ratios d_{k+1}/d_k of one log, skipping pairs whose newer
/// distance is below `floor` (round-off).
std::vector<double> contraction_ratios(const PicardWindowLog& log,
                                       double floor = 1e-12);

/// Front positions of a run as a trajectory on its uniform grid.
FrontTrajectory trajectory_of(const RunResult& result, double dt);

}  // namespace frontsim
