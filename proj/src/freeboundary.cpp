#include "frontsim/freeboundary.hpp"

#include "frontsim/pde.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace frontsim {

namespace {

[[noreturn]] void collapse(double s) {
  std::ostringstream msg;
  msg << "front collapse: s=" << s;
  throw StepError(StepError::Kind::FrontCollapse, msg.str());
}

}  // namespace

OdeStep ode_step(double s, double u1, const ModelParams& params, double dt,
                 OdeScheme scheme) {
  if (!(s > 0.0)) throw InvalidInput("violated constraint s>0");
  if (!(dt > 0.0)) throw InvalidInput("violated constraint dt>0");
  OdeStep out{};
  if (scheme == OdeScheme::Explicit) {
    out.s_t = params.a0 * (sigma(u1) - params.alpha * s);
    out.s_new = s + dt * out.s_t;
  } else {
    out.s_new = (s + dt * params.a0 * sigma(u1)) / (1.0 + dt * params.a0 * params.alpha);
    out.s_t = params.a0 * (sigma(u1) - params.alpha * out.s_new);
  }
  if (!(out.s_new > 0.0)) collapse(out.s_new);
  return out;
}

FrontTrajectory FrontTrajectory::constant(double t0, double dt,
                                          Eigen::Index steps, double value) {
  return {t0, dt, Eigen::VectorXd::Constant(steps + 1, value),
          Eigen::VectorXd::Zero(steps)};
}

FrontTrajectory FrontTrajectory::from_nodes(double t0, double dt,
                                            Eigen::VectorXd s) {
  FrontTrajectory tr{t0, dt, std::move(s), {}};
  const Eigen::Index M = tr.s.size() - 1;
  tr.s_t = (tr.s.tail(M) - tr.s.head(M)) / dt;
  return tr;
}

double FrontTrajectory::w12_norm() const {
  const Eigen::Index M = steps();
  const double s2 = dt * (s.squaredNorm() - 0.5 * (s[0] * s[0] + s[M] * s[M]));
  return std::sqrt(s2 + dt * s_t.squaredNorm());
}

void FrontTrajectory::validate() const {
  if (s.size() < 2 || s_t.size() != s.size() - 1)
    throw InvalidInput("trajectory needs M+1 positions and M velocities");
  if (!(dt > 0.0)) throw InvalidInput("violated constraint dt>0");
  if (!((s.array() > 0.0).all())) throw InvalidInput("violated constraint s>0");
  if (!s.allFinite() || !s_t.allFinite()) throw InvalidInput("trajectory finite");
}

double BoundaryTrace::zero_extended(double t) const {
  const double end = end_time();
  if (t < t0 || t > end) return 0.0;
  const double x = (t - t0) / dt;
  const auto last = values.size() - 1;
  auto k = static_cast<Eigen::Index>(std::floor(x));
  if (k >= last) return values[last];
  if (k < 0) k = 0;
  const double w = x - static_cast<double>(k);
  return values[k] * (1.0 - w) + values[k + 1] * w;
}

FrontTrajectory gamma_map(const FrontTrajectory& s_traj,
                          const BoundaryTrace& trace,
                          const ModelParams& params) {
  s_traj.validate();
  const Eigen::Index M = s_traj.steps();
  if (trace.values.size() != M + 1)
    throw InvalidInput("trace and trajectory must share the time grid");
  Eigen::VectorXd integrand(M + 1);
  for (Eigen::Index k = 0; k <= M; ++k)
    integrand[k] = params.a0 * (sigma(trace.values[k]) - params.alpha * s_traj.s[k]);

  FrontTrajectory out{s_traj.t0, s_traj.dt, Eigen::VectorXd(M + 1),
                      Eigen::VectorXd(M)};
  out.s[0] = s_traj.s[0];
  for (Eigen::Index k = 0; k < M; ++k) {
    out.s_t[k] = 0.5 * (integrand[k] + integrand[k + 1]);
    out.s[k + 1] = out.s[k] + s_traj.dt * out.s_t[k];
    if (!(out.s[k + 1] > 0.0)) collapse(out.s[k + 1]);
  }
  return out;
}

double w12_distance(const FrontTrajectory& a, const FrontTrajectory& b) {
  if (a.s.size() != b.s.size() || a.dt != b.dt)
    throw InvalidInput("trajectories must share the time grid");
  FrontTrajectory diff{a.t0, a.dt, a.s - b.s, a.s_t - b.s_t};
  return diff.w12_norm();
}

namespace {

constexpr int kSimpsonIntervals = 64;

double bump(double x) {
  return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
}

// Simpson weights on [-1, 1] with 64 subintervals, times the bump, summed:
// the discrete normaliser of the kernel.
double bump_mass() {
  static const double mass = [] {
    const double hx = 2.0 / kSimpsonIntervals;
    double acc = 0.0;
    for (int i = 0; i <= kSimpsonIntervals; ++i) {
      const double w = (i == 0 || i == kSimpsonIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * bump(-1.0 + hx * i);
    }
    return acc * hx / 3.0;
  }();
  return mass;
}

}  // namespace

double mollifier_kernel(double t, double epsilon) {
  return bump(t / epsilon) / (bump_mass() * epsilon);
}

double mollify_at(const BoundaryTrace& trace, double epsilon, double t) {
  if (!(epsilon > 0.0)) throw InvalidInput("violated constraint epsilon>0");
  const double h = 2.0 * epsilon / kSimpsonIntervals;
  double acc = 0.0;
  for (int i = 1; i < kSimpsonIntervals; ++i) {  // kernel vanishes at both ends
    const double tau = -epsilon + h * i;
    const double w = (i % 2) ? 4.0 : 2.0;
    acc += w * mollifier_kernel(tau, epsilon) * trace.zero_extended(t - tau);
  }
  return acc * h / 3.0;
}

BoundaryTrace mollify(const BoundaryTrace& trace, double epsilon) {
  BoundaryTrace out{trace.t0, trace.dt, Eigen::VectorXd(trace.values.size())};
  for (Eigen::Index k = 0; k < trace.values.size(); ++k)
    out.values[k] = mollify_at(trace, epsilon, trace.t0 + trace.dt * static_cast<double>(k));
  return out;
}

}  // namespace frontsim
