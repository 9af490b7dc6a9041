#include "frontsim/pde.hpp"

#include "frontsim/tridiagonal.hpp"

#include <cmath>
#include <sstream>

namespace frontsim {

void StepInputs::validate() const {
  if (state == nullptr || params == nullptr)
    throw InvalidInput("step inputs need a state and parameters");
  state->validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("violated constraint dt>0");
  if (!std::isfinite(s_new) || !std::isfinite(s_t) || !std::isfinite(b_now))
    throw InvalidInput("step coefficients must be finite");
  if (!(s_new > params->s_min())) {
    std::ostringstream msg;
    msg << "front collapse: s=" << s_new << " <= s_min=" << params->s_min();
    throw StepError(StepError::Kind::FrontCollapse, msg.str());
  }
  if (forcing && forcing->size() != state->u.size())
    throw InvalidInput("forcing must have one value per node");
}

namespace {

struct FluxEval {
  double g;
  double dg;
};

FluxEval eval_flux(const StepInputs& in, double u) {
  const ModelParams& p = *in.params;
  const double su = sigma(u);
  const double ds = sigma_prime(u);
  switch (in.law.kind) {
    case RightBoundaryLaw::Kind::AP1:
      return {p.a0 * su * (su - p.alpha * in.s_new),
              p.a0 * ds * (2.0 * su - p.alpha * in.s_new)};
    case RightBoundaryLaw::Kind::AP2:
      return {p.a0 * (su * su - p.alpha * sigma(in.law.frozen_trace) * in.s_new),
              p.a0 * ds * 2.0 * su};
    case RightBoundaryLaw::Kind::PC:
      break;
  }
  return {su * in.s_t, ds * in.s_t};
}

// Coefficients shared by step() and the residual, all in the hat-function
// weighted scaling (row j multiplied by the measure of its test function).
struct Stencil {
  Eigen::Index N;
  double h;
  double D;      // 1/(s^2 h), P1 stiffness
  double mass;   // h/dt
  double kappa;  // weight of the y=1 flux: 1/s + (h/2) s_t

  explicit Stencil(const StepInputs& in)
      : N(in.state->grid_size()),
        h(1.0 / static_cast<double>(N)),
        D(1.0 / (in.s_new * in.s_new * h)),
        mass(h / in.dt),
        kappa(1.0 / in.s_new + 0.5 * h * in.s_t) {}

  [[nodiscard]] double advection(const StepInputs& in, Eigen::Index j) const {
    return static_cast<double>(j) * h * in.s_t / in.s_new;
  }
};

double forcing_at(const StepInputs& in, Eigen::Index j) {
  return in.forcing ? (*in.forcing)[j] : 0.0;
}

}  // namespace

double right_flux(const StepInputs& in, double u1) { return eval_flux(in, u1).g; }

Eigen::VectorXd step(const StepInputs& in, const BoundarySolveOptions& opts) {
  in.validate();
  const ModelParams& p = *in.params;
  const Eigen::VectorXd& un = in.state->u;
  const Stencil st(in);
  const Eigen::Index N = st.N;

  Tridiagonal<double> sys(N + 1);
  sys.diag[0] = 0.5 * st.mass + st.D + p.beta * p.gamma / in.s_new;
  sys.upper[0] = -st.D;
  sys.rhs[0] = 0.5 * st.mass * un[0] + (p.beta * in.b_now + in.left_source) / in.s_new +
               0.5 * st.h * forcing_at(in, 0);
  for (Eigen::Index j = 1; j < N; ++j) {
    const double c = st.advection(in, j);
    sys.lower[j] = -st.D - (c < 0.0 ? -c : 0.0);
    sys.upper[j] = -st.D - (c > 0.0 ? c : 0.0);
    sys.diag[j] = st.mass + 2.0 * st.D + std::abs(c);
    sys.rhs[j] = st.mass * un[j] + st.h * forcing_at(in, j);
  }
  sys.lower[N] = -st.D;
  sys.diag[N] = 0.5 * st.mass + st.D;
  sys.rhs[N] = 0.5 * st.mass * un[N] + 0.5 * st.h * forcing_at(in, N) -
               st.kappa * in.right_source;

  if (!forward_eliminate(sys, N))
    throw StepError(StepError::Kind::SingularSystem,
                    "singular tridiagonal system; reduce dt");

  // Boundary row after elimination: A x + kappa g(x) = R.
  const double A = sys.diag[N] - sys.lower[N] * sys.upper[N - 1];
  const double R = sys.rhs[N] - sys.lower[N] * sys.rhs[N - 1];
  auto phi = [&](double x) {
    const FluxEval f = eval_flux(in, x);
    return std::pair{A * x + st.kappa * f.g - R, A + st.kappa * f.dg};
  };

  double x = un[N];
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const auto [val, slope] = phi(x);
    if (!(std::abs(slope) > 0.0) || !std::isfinite(val)) break;
    const double dx = val / slope;
    x -= dx;
    if (std::abs(dx) <= opts.tol * std::max(1.0, std::abs(x))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    x = un[N];
    for (int it = 0; it < 4 * opts.max_iterations; ++it) {
      const double next = (R - st.kappa * eval_flux(in, x).g) / A;
      if (!std::isfinite(next)) break;
      const double dx = next - x;
      x = next;
      if (std::abs(dx) <= opts.tol * std::max(1.0, std::abs(x))) {
        converged = true;
        break;
      }
    }
  }
  if (!converged || !std::isfinite(x))
    throw StepError(StepError::Kind::BoundaryNewton,
                    "boundary row at y=1 did not converge");

  Eigen::VectorXd u(N + 1);
  u[N] = x;
  back_substitute(sys, N, u);
  return u;
}

namespace {

// Terms of the weighted row j, summed either signed or in absolute value.
template <class Combine>
double residual_terms(const StepInputs& in,
                      const Eigen::Ref<const Eigen::VectorXd>& u,
                      Eigen::Index j, Combine add) {
  const ModelParams& p = *in.params;
  const Eigen::VectorXd& un = in.state->u;
  const Stencil st(in);
  const Eigen::Index N = st.N;
  double acc = 0.0;
  if (j == 0) {
    add(acc, 0.5 * st.mass * u[0]);
    add(acc, -0.5 * st.mass * un[0]);
    add(acc, st.D * u[0]);
    add(acc, -st.D * u[1]);
    add(acc, -p.beta * in.b_now / in.s_new);
    add(acc, p.beta * p.gamma * u[0] / in.s_new);
    add(acc, -in.left_source / in.s_new);
    add(acc, -0.5 * st.h * forcing_at(in, 0));
  } else if (j == N) {
    add(acc, 0.5 * st.mass * u[N]);
    add(acc, -0.5 * st.mass * un[N]);
    add(acc, st.D * u[N]);
    add(acc, -st.D * u[N - 1]);
    add(acc, st.kappa * right_flux(in, u[N]));
    add(acc, st.kappa * in.right_source);
    add(acc, -0.5 * st.h * forcing_at(in, N));
  } else {
    const double c = st.advection(in, j);
    add(acc, st.mass * u[j]);
    add(acc, -st.mass * un[j]);
    add(acc, 2.0 * st.D * u[j]);
    add(acc, -st.D * u[j - 1]);
    add(acc, -st.D * u[j + 1]);
    if (c > 0.0) {
      add(acc, -c * u[j + 1]);
      add(acc, c * u[j]);
    } else if (c < 0.0) {
      add(acc, -c * u[j]);
      add(acc, c * u[j - 1]);
    }
    add(acc, -st.h * forcing_at(in, j));
  }
  return acc;
}

}  // namespace

double weak_residual(const StepInputs& in,
                     const Eigen::Ref<const Eigen::VectorXd>& u_new,
                     Eigen::Index j) {
  return residual_terms(in, u_new, j, [](double& a, double t) { a += t; });
}

double weak_residual_scale(const StepInputs& in,
                           const Eigen::Ref<const Eigen::VectorXd>& u_new,
                           Eigen::Index j) {
  return residual_terms(in, u_new, j,
                        [](double& a, double t) { a += std::abs(t); });
}

ResidualSummary weak_residual_summary(
    const StepInputs& in, const Eigen::Ref<const Eigen::VectorXd>& u_new) {
  ResidualSummary out;
  double scale = 0.0;
  for (Eigen::Index j = 0; j < u_new.size(); ++j) {
    out.max_abs = std::max(out.max_abs, std::abs(weak_residual(in, u_new, j)));
    scale = std::max(scale, weak_residual_scale(in, u_new, j));
  }
  if (scale > 0.0) out.max_relative = out.max_abs / scale;
  return out;
}

}  // namespace frontsim
