#pragma once

#include "frontsim/coupler.hpp"
#include "frontsim/model.hpp"
#include "frontsim/pde.hpp"

#include <functional>
#include <string>
#include <vector>

namespace frontsim {

/// A closed-form (u~, s) pair together with the volume forcing and boundary
/// data that make it an exact solution of the fixed-domain problem.
struct ManufacturedCase {
  std::string name;
  ModelParams params;
  std::function<double(double, double)> u_exact;  // (t, y)
  std::function<double(double)> s_exact;
  std::function<double(double)> s_t_exact;
  std::function<double(double, double)> forcing;  // (t, y)
  std::function<double(double)> b;
  std::function<double(double)> left_source;
  std::function<double(double)> right_source;
  RightBoundaryLaw law = RightBoundaryLaw::pc();
};

/// u = e^{-t} cos(pi y), static front s = 1.
ManufacturedCase static_front_case();
/// u = 1, s = 1 + t/4. Every stencil reproduces it exactly.
ManufacturedCase constant_moving_case();
/// u = e^{-t}(2 + cos(pi y)), s = 1 + t/4; exercises the advection term.
ManufacturedCase moving_front_case();

/// Step inputs for the case at step n -> n+1 (coefficients at t_new).
StepInputs manufactured_inputs(const ManufacturedCase& mc, const SimState& state,
                               double t_new, double dt);

/// Marches pde::step against the exact front; returns the max nodal error
/// at t_final. t_final must be a multiple of dt.
double manufactured_error(const ManufacturedCase& mc, Eigen::Index N, double dt,
                          double t_final);

/// max_j |R_j| / w_j of the exact solution inserted into the discrete weak
/// residual for one step ending at t_new (truncation error of the scheme).
double manufactured_truncation(const ManufacturedCase& mc, Eigen::Index N,
                               double dt, double t_new);

struct GridLevel {
  Eigen::Index N;
  double dt;
};

struct ConvergenceRow {
  Eigen::Index N = 0;
  double dt = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN on the first row
};

struct ConvergenceTable {
  std::string case_name;
  std::vector<ConvergenceRow> rows;
  bool monotone = true;

  [[nodiscard]] double min_order() const;
};

/// Errors and observed orders over refinement levels. Orders use the N
/// ratio when N changes between levels and the dt ratio otherwise.
ConvergenceTable convergence_study(const ManufacturedCase& mc,
                                   const std::vector<GridLevel>& grids,
                                   double t_final);

struct EpsilonRow {
  double epsilon = 0.0;
  double deviation = 0.0;
  bool in_monotonicity_check = true;  // false when epsilon exceeds the horizon
};

struct EpsilonStudy {
  std::vector<EpsilonRow> rows;
  bool passed = true;
};

/// V(T)-type distance max_n |e^n|_H + (sum dt |e^n_y|_H^2)^{1/2}.
double v_norm_distance(const std::vector<SimState>& a,
                       const std::vector<SimState>& b, double dt);

/// Freezes the front of a sequential run, then compares the direct AP1
/// solve against the AP2_eps fixed point for each epsilon. Deviations must
/// be non-increasing within 5% (plus 1e-12 absolute) as epsilon decreases.
EpsilonStudy epsilon_study(const ModelParams& params, const BoundaryDrive& drive,
                           const InitialProfile& u0,
                           const std::vector<double>& epsilons,
                           const RunConfig& config);

struct AlphaRegressionReport {
  double min_s_t = 0.0;
  double s_initial = 0.0;
  double s_final = 0.0;
  bool monotone = true;           // s_t >= -1e-12 everywhere
  bool grew = true;               // s(T) > s0 when b > 0 somewhere
  double paired_max_s = 0.0;      // alpha = 1 run
  double paired_M_front = 0.0;
  bool paired_bounded = true;
  RunStatus status = RunStatus::Completed;
  RunStatus paired_status = RunStatus::Completed;

  [[nodiscard]] bool passed() const {
    return monotone && grew && paired_bounded && status == RunStatus::Completed &&
           paired_status == RunStatus::Completed;
  }
};

/// Requires params.alpha == 0; the paired run uses alpha = 1.
AlphaRegressionReport alpha_regression(const ModelParams& params,
                                       const BoundaryDrive& drive,
                                       const InitialProfile& u0,
                                       const RunConfig& config);

}  // namespace frontsim
