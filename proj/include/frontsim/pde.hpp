#pragma once

#include "frontsim/model.hpp"

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>

namespace frontsim {

/// Failure inside a time step. The kind maps onto run statuses.
class StepError : public std::runtime_error {
 public:
  enum class Kind { SingularSystem, BoundaryNewton, FrontCollapse, InnerIteration };

  StepError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Flux law at y = 1, written as -(1/s) u_y(1) = g(u(1)).
///
///   AP1: g = a0 sigma(u)(sigma(u) - alpha s)
///   AP2: g = a0 (sigma(u)^2 - alpha sigma(eta) s), eta a frozen trace value
///   PC:  g = sigma(u) s_t, s_t supplied by the caller
struct RightBoundaryLaw {
  enum class Kind { AP1, AP2, PC };

  Kind kind = Kind::PC;
  double frozen_trace = 0.0;  // used by AP2 only

  static RightBoundaryLaw ap1() { return {Kind::AP1, 0.0}; }
  static RightBoundaryLaw ap2(double eta) { return {Kind::AP2, eta}; }
  static RightBoundaryLaw pc() { return {Kind::PC, 0.0}; }
};

/// Everything one backward-Euler step needs. The old state supplies u^n;
/// all coefficients are taken at the new time level (s_new, s_t, b_now).
struct StepInputs {
  const SimState* state = nullptr;
  const ModelParams* params = nullptr;
  double s_new = 1.0;
  double s_t = 0.0;
  double dt = 1e-3;
  double b_now = 0.0;
  RightBoundaryLaw law = RightBoundaryLaw::pc();
  /// Nodal volume source added to the right side of the PDE.
  std::optional<Eigen::VectorXd> forcing;
  /// Extra flux data added to the Robin flux at y = 0 and to g at y = 1.
  double left_source = 0.0;
  double right_source = 0.0;

  void validate() const;
};

/// Boundary Newton settings. Discretisation artifacts, not model constants.
struct BoundarySolveOptions {
  double tol = 1e-12;
  int max_iterations = 50;
};

/// Solves one implicit step and returns u^{n+1} on the same grid.
///
/// Diffusion is second-order central, advection (y s_t/s) u_y first-order
/// upwind at interior nodes, the Robin condition at y = 0 and the flux law
/// at y = 1 enter through eliminated ghost nodes. The nonlinear flux at
/// y = 1 is resolved by a scalar Newton iteration on the boundary row after
/// forward elimination of the interior; Picard iteration is the fallback.
///
/// Nonnegativity holds without a step restriction while s_t >= 0. For a
/// retreating front it needs dt <= s h / (2 |s_t|), which keeps the y = 1
/// row diagonally dominant.
Eigen::VectorXd step(const StepInputs& in,
                     const BoundarySolveOptions& opts = {});

/// Flux g(u) of the boundary law at y = 1 for the given step coefficients.
double right_flux(const StepInputs& in, double u1);

/// Residual of the discrete weak form over one step tested against the hat
/// function of node j (lumped mass, exact P1 stiffness, both boundary
/// terms). Zero to round-off when u_new came from step() with the same
/// inputs.
double weak_residual(const StepInputs& in,
                     const Eigen::Ref<const Eigen::VectorXd>& u_new,
                     Eigen::Index j);

/// Sum of absolute values of the individual terms of the residual at node
/// j; the natural scale against which weak_residual is small.
double weak_residual_scale(const StepInputs& in,
                           const Eigen::Ref<const Eigen::VectorXd>& u_new,
                           Eigen::Index j);

/// max_relative is normwise: max_j |R_j| / max_j scale_j. Per-row ratios
/// are meaningless where the solution underflows towards zero.
struct ResidualSummary {
  double max_abs = 0.0;
  double max_relative = 0.0;
};

ResidualSummary weak_residual_summary(
    const StepInputs& in, const Eigen::Ref<const Eigen::VectorXd>& u_new);

}  // namespace frontsim
