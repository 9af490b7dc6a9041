#pragma once

#include "frontsim/model.hpp"

#include <Eigen/Core>

namespace frontsim {

/// Concentration on the physical interval [0, s].
struct PhysicalProfile {
  Eigen::VectorXd z;
  Eigen::VectorXd values;
  double s = 1.0;

  void validate() const;
};

/// Piecewise-linear interpolation of (nodes, values) at x, clamped to the
/// node range. Exact at nodes.
double interpolate(const Eigen::Ref<const Eigen::VectorXd>& nodes,
                   const Eigen::Ref<const Eigen::VectorXd>& values, double x);

/// u~(y_j) = u(y_j s) on the uniform fixed grid y_j = j/N.
Eigen::VectorXd to_fixed(const PhysicalProfile& profile, Eigen::Index N);

/// Inverse map: z_j = y_j s, values copied.
PhysicalProfile to_physical(const SimState& state);

/// Samples of u0 laid out on [0, s0], mapped onto the fixed grid.
Eigen::VectorXd initial_fixed_profile(const InitialProfile& u0, double s0,
                                      Eigen::Index N);

/// State at t = 0; s_t taken from the front law at the initial trace.
SimState initial_state(const ModelParams& params, const InitialProfile& u0,
                       Eigen::Index N);

/// Uniform fixed grid j/N, j = 0..N.
Eigen::VectorXd fixed_grid(Eigen::Index N);

}  // namespace frontsim
