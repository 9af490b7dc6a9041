#include "frontsim/coupler.hpp"

#include "frontsim/transform.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace frontsim {

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::FrontCollapse: return "front_collapse";
    case RunStatus::PicardFailure: return "picard_failure";
    case RunStatus::InvariantViolation: return "invariant_violation";
  }
  return "unknown";
}

Eigen::Index RunConfig::steps() const {
  if (!(dt > 0.0)) throw InvalidInput("violated constraint dt>0");
  if (!(stop_time > 0.0)) throw InvalidInput("violated constraint stop_time>0");
  const double ratio = stop_time / dt;
  const auto n = static_cast<Eigen::Index>(std::llround(ratio));
  if (n < 1 || std::abs(static_cast<double>(n) - ratio) > 1e-9 * ratio)
    throw InvalidInput("violated constraint stop_time = n*dt for an integer n");
  return n;
}

Eigen::Index RunConfig::window_steps() const {
  return std::max<Eigen::Index>(4, std::llround(window / dt));
}

void RunConfig::validate() const {
  if (N < 2) throw InvalidInput("violated constraint N>=2");
  (void)steps();
  if (mode == RunMode::Picard) {
    if (!(window > 0.0)) throw InvalidInput("violated constraint window>0");
    if (!(picard_tol > 0.0)) throw InvalidInput("violated constraint picard_tol>0");
    if (picard_max_iters < 1) throw InvalidInput("violated constraint picard_max_iters>=1");
  }
  if (epsilon && !(*epsilon > 0.0)) throw InvalidInput("violated constraint epsilon>0");
}

double RunResult::max_s() const {
  double m = 0.0;
  for (const SimState& st : states) m = std::max(m, st.s);
  return m;
}

namespace {

class Monitor {
 public:
  Monitor(const ModelParams& params, const BoundaryDrive& drive,
          const InitialProfile& u0, const MonitorTolerances& tol)
      : params_(params), tol_(tol) {
    b_star_ = b_star(params, drive, u0);
    M_front_ = params.alpha > 0.0 ? apriori_front_cap(params, drive, u0).M_front
                                  : std::numeric_limits<double>::infinity();
  }

  InvariantRecord record(const SimState& st, const ResidualSummary& res) {
    max_s_ = std::max(max_s_, st.s);
    InvariantRecord r;
    r.t = st.t;
    r.s = st.s;
    r.s_t = st.s_t;
    r.u_left = st.u[0];
    r.u_right = st.u[st.u.size() - 1];
    r.min_u = st.u.minCoeff();
    r.max_u = st.u.maxCoeff();
    r.max_s = max_s_;
    r.u_star = u_star(params_.alpha, max_s_, b_star_, params_.gamma);
    r.M_front = M_front_;
    r.energy = energy_.push(st);
    r.residual_max = res.max_abs;
    r.residual_relative = res.max_relative;
    r.lower_ok = r.min_u >= -tol_.lower * r.u_star;
    r.upper_ok = r.max_u <= r.u_star * (1.0 + tol_.upper);
    r.residual_ok = r.residual_relative <= tol_.residual;
    r.front_ok = st.s <= M_front_ * (1.0 + tol_.front);
    return r;
  }

  [[nodiscard]] double b_star_value() const { return b_star_; }

 private:
  ModelParams params_;
  MonitorTolerances tol_;
  double b_star_ = 0.0;
  double M_front_ = 0.0;
  double max_s_ = 0.0;
  EnergyAccumulator energy_;
};

std::string violation_message(const InvariantRecord& r) {
  std::ostringstream msg;
  msg << "invariant violated at t=" << r.t << ":";
  if (!r.lower_ok) msg << " min_u=" << r.min_u;
  if (!r.upper_ok) msg << " max_u=" << r.max_u << " > u*=" << r.u_star;
  if (!r.residual_ok) msg << " residual=" << r.residual_relative;
  if (!r.front_ok) msg << " s=" << r.s << " > M=" << r.M_front;
  return msg.str();
}

RunStatus status_for(const StepError& e) {
  return e.kind() == StepError::Kind::FrontCollapse ? RunStatus::FrontCollapse
                                                   : RunStatus::InvariantViolation;
}

// Appends a state and its record; false when the record violates a monitor.
bool commit(RunResult& out, Monitor& monitor, SimState st,
            const ResidualSummary& res) {
  InvariantRecord rec = monitor.record(st, res);
  out.states.push_back(std::move(st));
  out.report.push_back(rec);
  if (!rec.ok()) {
    out.status = RunStatus::InvariantViolation;
    out.message = violation_message(rec);
    return false;
  }
  return true;
}

void finish(RunResult& out) {
  std::vector<double> t, E;
  t.reserve(out.report.size());
  E.reserve(out.report.size());
  for (const auto& r : out.report) {
    t.push_back(r.t);
    E.push_back(r.energy);
  }
  out.energy_growth_warning = energy_doubles_within_unit_time(t, E);
}

void check_inputs(const ModelParams& params, const BoundaryDrive& drive,
                  const InitialProfile& u0, const RunConfig& config) {
  params.validate();
  u0.validate();
  config.validate();
  (void)drive;
  if (config.stop_time > params.T * (1.0 + 1e-12))
    throw InvalidInput("violated constraint stop_time<=T");
}

}  // namespace

RunResult run_sequential(const ModelParams& params, const BoundaryDrive& drive,
                         const InitialProfile& u0, const RunConfig& config,
                         const MonitorTolerances& tol) {
  check_inputs(params, drive, u0, config);
  const Eigen::Index n = config.steps();
  const Eigen::Index N = config.N;
  Monitor monitor(params, drive, u0, tol);
  RunResult out;
  out.b_star = monitor.b_star_value();
  out.states.reserve(static_cast<std::size_t>(n + 1));
  out.report.reserve(static_cast<std::size_t>(n + 1));
  if (!commit(out, monitor, initial_state(params, u0, N), {})) return out;

  for (Eigen::Index k = 0; k < n; ++k) {
    const SimState& cur = out.states.back();
    const double t_new = config.dt * static_cast<double>(k + 1);
    SimState next;
    ResidualSummary res;
    try {
      const OdeStep ode = ode_step(cur.s, cur.u[N], params, config.dt, OdeScheme::Implicit);
      StepInputs in;
      in.state = &cur;
      in.params = &params;
      in.s_new = ode.s_new;
      in.s_t = ode.s_t;
      in.dt = config.dt;
      in.b_now = drive.value(t_new);
      in.law = RightBoundaryLaw::pc();
      next.u = step(in);
      res = weak_residual_summary(in, next.u);
      next.t = t_new;
      next.s = ode.s_new;
      next.s_t = ode.s_t;
    } catch (const StepError& e) {
      out.status = status_for(e);
      out.message = e.what();
      break;
    }
    if (!commit(out, monitor, std::move(next), res)) break;
  }
  finish(out);
  return out;
}

WindowSolution solve_ap1_window(const FrontTrajectory& s_traj,
                                const ModelParams& params,
                                const BoundaryDrive& drive,
                                const SimState& u_init) {
  s_traj.validate();
  const Eigen::Index M = s_traj.steps();
  const Eigen::Index N = u_init.grid_size();
  WindowSolution sol;
  sol.states.reserve(static_cast<std::size_t>(M + 1));
  SimState first = u_init;
  first.t = s_traj.t0;
  first.s = s_traj.s[0];
  sol.states.push_back(std::move(first));
  sol.trace = {s_traj.t0, s_traj.dt, Eigen::VectorXd(M + 1)};
  sol.trace.values[0] = u_init.u[N];
  for (Eigen::Index k = 0; k < M; ++k) {
    StepInputs in;
    in.state = &sol.states.back();
    in.params = &params;
    in.s_new = s_traj.s[k + 1];
    in.s_t = s_traj.s_t[k];
    in.dt = s_traj.dt;
    in.b_now = drive.value(s_traj.time(k + 1));
    in.law = RightBoundaryLaw::ap1();
    SimState next{s_traj.time(k + 1), s_traj.s[k + 1], s_traj.s_t[k], step(in)};
    sol.residuals.push_back(weak_residual_summary(in, next.u));
    sol.trace.values[k + 1] = next.u[N];
    sol.states.push_back(std::move(next));
  }
  return sol;
}

WindowSolution solve_ap2_eps_window(const FrontTrajectory& s_traj,
                                    const ModelParams& params,
                                    const BoundaryDrive& drive,
                                    const SimState& u_init, double epsilon,
                                    const InnerIterationOptions& opts) {
  s_traj.validate();
  const Eigen::Index M = s_traj.steps();
  const Eigen::Index N = u_init.grid_size();
  BoundaryTrace eta{s_traj.t0, s_traj.dt,
                    Eigen::VectorXd::Constant(M + 1, u_init.u[N])};
  for (int it = 0; it < opts.max_iterations; ++it) {
    const BoundaryTrace frozen = mollify(eta, epsilon);
    WindowSolution sol;
    sol.states.reserve(static_cast<std::size_t>(M + 1));
    SimState first = u_init;
    first.t = s_traj.t0;
    first.s = s_traj.s[0];
    sol.states.push_back(std::move(first));
    sol.trace = {s_traj.t0, s_traj.dt, Eigen::VectorXd(M + 1)};
    sol.trace.values[0] = u_init.u[N];
    for (Eigen::Index k = 0; k < M; ++k) {
      StepInputs in;
      in.state = &sol.states.back();
      in.params = &params;
      in.s_new = s_traj.s[k + 1];
      in.s_t = s_traj.s_t[k];
      in.dt = s_traj.dt;
      in.b_now = drive.value(s_traj.time(k + 1));
      in.law = RightBoundaryLaw::ap2(frozen.values[k + 1]);
      SimState next{s_traj.time(k + 1), s_traj.s[k + 1], s_traj.s_t[k], step(in)};
      sol.residuals.push_back(weak_residual_summary(in, next.u));
      sol.trace.values[k + 1] = next.u[N];
      sol.states.push_back(std::move(next));
    }
    const double change = (sol.trace.values - eta.values).cwiseAbs().maxCoeff();
    const double scale = 1.0 + sol.trace.values.cwiseAbs().maxCoeff();
    eta = sol.trace;
    if (change <= opts.tol * scale) return sol;
  }
  throw StepError(StepError::Kind::InnerIteration,
                  "AP2_eps trace iteration did not converge");
}

RunResult run_picard(const ModelParams& params, const BoundaryDrive& drive,
                     const InitialProfile& u0, const RunConfig& config,
                     const MonitorTolerances& tol) {
  check_inputs(params, drive, u0, config);
  const Eigen::Index n = config.steps();
  Monitor monitor(params, drive, u0, tol);
  RunResult out;
  out.b_star = monitor.b_star_value();
  if (!commit(out, monitor, initial_state(params, u0, config.N), {})) return out;

  Eigen::Index done = 0;
  Eigen::Index window = config.window_steps();
  while (done < n) {
    const SimState seam = out.states.back();
    Eigen::Index m = std::min(window, n - done);
    const Eigen::Index min_window = std::min<Eigen::Index>(4, n - done);
    std::optional<WindowSolution> accepted;
    std::string failure;
    bool collapsed = false;
    for (;;) {
      PicardWindowLog log;
      log.t_start = seam.t;
      log.steps = m;
      FrontTrajectory traj = FrontTrajectory::constant(seam.t, config.dt, m, seam.s);
      try {
        for (int it = 0; it < config.picard_max_iters; ++it) {
          WindowSolution sol =
              config.epsilon ? solve_ap2_eps_window(traj, params, drive, seam, *config.epsilon)
                             : solve_ap1_window(traj, params, drive, seam);
          FrontTrajectory next = gamma_map(traj, sol.trace, params);
          const double d = w12_distance(next, traj);
          log.distances.push_back(d);
          if (d < config.picard_tol) {
            log.converged = true;
            accepted = std::move(sol);
            break;
          }
          traj = std::move(next);
        }
        if (!log.converged) failure = "Picard iteration did not converge";
      } catch (const StepError& e) {
        failure = e.what();
        collapsed = e.kind() == StepError::Kind::FrontCollapse;
      }
      out.picard_log.push_back(log);
      if (accepted) break;
      if (m <= min_window) break;
      m = std::max(min_window, m / 2);
      window = m;
    }
    if (!accepted) {
      out.status = collapsed ? RunStatus::FrontCollapse : RunStatus::PicardFailure;
      out.message = failure + " (window " + std::to_string(m) + " steps at t=" +
                    std::to_string(seam.t) + ")";
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k < accepted->states.size() && ok; ++k) {
      // Same time stamps as the sequential run, free of window round-off.
      accepted->states[k].t = config.dt * static_cast<double>(done + static_cast<Eigen::Index>(k));
      ok = commit(out, monitor, std::move(accepted->states[k]), accepted->residuals[k - 1]);
    }
    if (!ok) break;
    done += m;
  }
  finish(out);
  return out;
}

RunResult run(const ModelParams& params, const BoundaryDrive& drive,
              const InitialProfile& u0, const RunConfig& config,
              const MonitorTolerances& tol) {
  return config.mode == RunMode::Picard ? run_picard(params, drive, u0, config, tol)
                                        : run_sequential(params, drive, u0, config, tol);
}

std::vector<double> contraction_ratios(const PicardWindowLog& log, double floor) {
  std::vector<double> ratios;
  for (std::size_t k = 1; k < log.distances.size(); ++k) {
    if (log.distances[k] < floor) continue;
    ratios.push_back(log.distances[k] / log.distances[k - 1]);
  }
  return ratios;
}

FrontTrajectory trajectory_of(const RunResult& result, double dt) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(result.states.size()));
  for (std::size_t k = 0; k < result.states.size(); ++k)
    s[static_cast<Eigen::Index>(k)] = result.states[k].s;
  return FrontTrajectory::from_nodes(result.states.front().t, dt, std::move(s));
}

}  // namespace frontsim
