#pragma once

#include "frontsim/model.hpp"

#include <Eigen/Core>

namespace frontsim {

enum class OdeScheme { Explicit, Implicit };

struct OdeStep {
  double s_new;
  double s_t;
};

/// One step of s_t = a0 (sigma(u1) - alpha s).
///
/// Explicit: s_t evaluated at s, s_new = s + dt s_t.
/// Implicit: s_new = (s + dt a0 sigma(u1)) / (1 + dt a0 alpha) and
/// s_t = a0 (sigma(u1) - alpha s_new), so s_new = s + dt s_t holds exactly
/// in exact arithmetic and the damping can never push s through zero.
/// Throws StepError(FrontCollapse) when s_new <= 0.
OdeStep ode_step(double s, double u1, const ModelParams& params, double dt,
                 OdeScheme scheme = OdeScheme::Implicit);

/// Front positions on the uniform grid t0 + k dt, k = 0..M. Velocities are
/// piecewise constant: s_t[k] lives on [t_k, t_{k+1}].
struct FrontTrajectory {
  double t0 = 0.0;
  double dt = 1.0;
  Eigen::VectorXd s;
  Eigen::VectorXd s_t;

  /// s held at `value` over `steps` intervals.
  static FrontTrajectory constant(double t0, double dt, Eigen::Index steps,
                                  double value);
  /// Velocities as difference quotients of the given node values.
  static FrontTrajectory from_nodes(double t0, double dt, Eigen::VectorXd s);

  [[nodiscard]] Eigen::Index steps() const { return s.size() - 1; }
  [[nodiscard]] double length() const { return dt * static_cast<double>(steps()); }
  [[nodiscard]] double time(Eigen::Index k) const { return t0 + dt * static_cast<double>(k); }
  /// Discrete W^{1,2} norm.
  [[nodiscard]] double w12_norm() const;
  void validate() const;
};

/// Values of u(., 1) (or of a frozen trace) at the trajectory nodes,
/// piecewise linear in time.
struct BoundaryTrace {
  double t0 = 0.0;
  double dt = 1.0;
  Eigen::VectorXd values;

  [[nodiscard]] double end_time() const {
    return t0 + dt * static_cast<double>(values.size() - 1);
  }
  /// Linear interpolation inside [t0, end], zero outside.
  [[nodiscard]] double zero_extended(double t) const;
};

/// Gamma(s)(t_k) = s(t_0) + trapezoid integral of a0 (sigma(trace) - alpha s).
/// The window is anchored at its own first value, which is s0 for the
/// first window. Throws StepError(FrontCollapse) if any output node is
/// non-positive.
FrontTrajectory gamma_map(const FrontTrajectory& s_traj,
                          const BoundaryTrace& trace, const ModelParams& params);

/// sqrt(sum dt (a.s - b.s)^2 [trapezoid] + sum dt (a.s_t - b.s_t)^2).
double w12_distance(const FrontTrajectory& a, const FrontTrajectory& b);

/// Normalised bump kernel exp(-1/(1-(t/eps)^2)) on (-eps, eps).
double mollifier_kernel(double t, double epsilon);

/// (rho_eps * trace)(t) at every trace node, with the trace extended by
/// zero outside its window. Composite Simpson on 64 subintervals of the
/// support; the kernel is normalised by the same rule so that constants are
/// reproduced exactly away from the window edges.
BoundaryTrace mollify(const BoundaryTrace& trace, double epsilon);

/// Single evaluation of the mollified trace at t.
double mollify_at(const BoundaryTrace& trace, double epsilon, double t);

}  // namespace frontsim
