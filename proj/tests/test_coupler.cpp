#include "frontsim/coupler.hpp"

#include "frontsim/transform.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace frontsim;

namespace {

RunConfig config(double dt, double stop, Eigen::Index N = 50) {
  RunConfig rc;
  rc.N = N;
  rc.dt = dt;
  rc.stop_time = stop;
  return rc;
}

ModelParams unit_params() { return ModelParams{1.0, 1.0, 1.0, 1.0, 1.0, 1.0}; }

}  // namespace

TEST(RunConfig, StepsAndWindows) {
  RunConfig rc = config(1e-3, 1.0);
  EXPECT_EQ(rc.steps(), 1000);
  rc.window = 0.1;
  EXPECT_EQ(rc.window_steps(), 100);
  rc.window = 1e-6;
  EXPECT_EQ(rc.window_steps(), 4);
  rc.stop_time = 1.00005;
  EXPECT_THROW((void)rc.steps(), InvalidInput);
  rc = config(1e-3, 1.0, 1);
  EXPECT_THROW(rc.validate(), InvalidInput);
}

TEST(Sequential, EquilibriumStaysPut) {
  const RunResult r = run_sequential(unit_params(), BoundaryDrive::constant(1.0),
                                     InitialProfile::constant(1.0), config(1e-2, 1.0));
  ASSERT_EQ(r.status, RunStatus::Completed);
  EXPECT_EQ(r.states.size(), 101u);
  EXPECT_EQ(r.report.size(), r.states.size());
  for (const SimState& st : r.states) {
    EXPECT_NEAR(st.s, 1.0, 1e-12);
    EXPECT_LE((st.u.array() - 1.0).abs().maxCoeff(), 1e-12);
  }
}

TEST(Sequential, DecayFollowsImplicitEulerExactly) {
  // b = 0, u0 = 0: u stays zero and s_n = s0 (1 + dt a0 alpha)^{-n}.
  ModelParams p{2.0, 0.5, 1.0, 1.0, 1.5, 1.0};
  const RunResult r = run_sequential(p, BoundaryDrive::constant(0.0),
                                     InitialProfile::constant(0.0), config(1e-2, 1.0));
  ASSERT_EQ(r.status, RunStatus::Completed);
  for (std::size_t n = 0; n < r.states.size(); ++n) {
    EXPECT_NEAR(r.states[n].s, 1.5 * std::pow(1.01, -static_cast<double>(n)), 1e-14);
    EXPECT_EQ(r.states[n].u.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Sequential, CollapseIsReported) {
  ModelParams p{10.0, 10.0, 1.0, 1.0, 1.0, 1.0};
  const RunResult r = run_sequential(p, BoundaryDrive::constant(0.0),
                                     InitialProfile::constant(0.0), config(1e-3, 1.0));
  EXPECT_EQ(r.status, RunStatus::FrontCollapse);
  EXPECT_NE(r.message.find("collapse"), std::string::npos);
  EXPECT_GT(r.final_state().s, p.s_min());
}

TEST(Sequential, MonitorFlagsViolations) {
  MonitorTolerances strict;
  strict.upper = -0.5;  // demands max u <= u*/2
  const RunResult r = run_sequential(unit_params(), BoundaryDrive::constant(1.0),
                                     InitialProfile::constant(1.0), config(1e-2, 1.0), strict);
  EXPECT_EQ(r.status, RunStatus::InvariantViolation);
  EXPECT_FALSE(r.report.back().upper_ok);
  EXPECT_EQ(r.states.size(), 1u);
}

TEST(Sequential, ReportsBoundsAlongTheRun) {
  const BoundaryDrive b({0.0, 0.5, 1.0}, {0.0, 2.0, 1.0});
  const RunResult r = run_sequential(unit_params(), b, InitialProfile{{0.2, 0.0}}, config(1e-3, 1.0));
  ASSERT_EQ(r.status, RunStatus::Completed);
  EXPECT_DOUBLE_EQ(r.b_star, 2.0);
  double running_max = 0.0;
  for (std::size_t k = 0; k < r.report.size(); ++k) {
    const InvariantRecord& rec = r.report[k];
    running_max = std::max(running_max, r.states[k].s);
    EXPECT_DOUBLE_EQ(rec.max_s, running_max);
    EXPECT_DOUBLE_EQ(rec.u_star, std::max(running_max, 2.0));
    EXPECT_TRUE(rec.ok());
  }
}

TEST(Sequential, RejectsStopBeyondHorizon) {
  EXPECT_THROW(run_sequential(unit_params(), BoundaryDrive::constant(1.0),
                              InitialProfile::constant(1.0), config(1e-2, 2.0)),
               InvalidInput);
}

TEST(Picard, EquilibriumConvergesImmediately) {
  RunConfig rc = config(1e-2, 1.0);
  rc.mode = RunMode::Picard;
  rc.window = 0.25;
  const RunResult r = run(unit_params(), BoundaryDrive::constant(1.0),
                          InitialProfile::constant(1.0), rc);
  ASSERT_EQ(r.status, RunStatus::Completed);
  ASSERT_EQ(r.picard_log.size(), 4u);
  for (const PicardWindowLog& log : r.picard_log) {
    EXPECT_TRUE(log.converged);
    EXPECT_EQ(log.steps, 25);
    EXPECT_EQ(log.distances.size(), 1u);
  }
  EXPECT_NEAR(r.final_state().s, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.final_state().t, 1.0);
}

TEST(Picard, AgreesWithSequentialToFirstOrder) {
  const ModelParams p{1.0, 1.0, 2.0, 1.0, 1.0, 0.5};
  const BoundaryDrive b({0.0, 0.5}, {1.0, 1.5});
  const InitialProfile u0{{1.0, 0.5, 0.0}};
  double prev = 0.0;
  for (double dt : {2e-3, 1e-3}) {
    RunConfig rc = config(dt, 0.5, 100);
    rc.window = 0.1;
    const RunResult seq = run_sequential(p, b, u0, rc);
    rc.mode = RunMode::Picard;
    const RunResult pic = run_picard(p, b, u0, rc);
    ASSERT_EQ(pic.status, RunStatus::Completed);
    ASSERT_EQ(pic.states.size(), seq.states.size());
    double gap = 0.0;
    for (std::size_t k = 0; k < seq.states.size(); ++k)
      gap = std::max(gap, std::abs(seq.states[k].s - pic.states[k].s));
    EXPECT_LT(gap, 0.5 * dt);
    if (prev > 0.0) EXPECT_LT(gap, 0.7 * prev);
    prev = gap;
    for (const PicardWindowLog& log : pic.picard_log)
      for (double q : contraction_ratios(log)) EXPECT_LT(q, 1.0);
  }
}

TEST(Picard, FailureStatusWhenIterationsRunOut) {
  RunConfig rc = config(1e-2, 0.2);
  rc.mode = RunMode::Picard;
  rc.picard_max_iters = 1;
  rc.picard_tol = 1e-14;
  const RunResult r = run(unit_params(), BoundaryDrive::constant(1.0),
                          InitialProfile::constant(0.0), rc);
  EXPECT_EQ(r.status, RunStatus::PicardFailure);
  // The window halves down to the 4-step floor before giving up.
  EXPECT_EQ(r.picard_log.back().steps, 4);
}

TEST(Picard, MollifiedInnerSolveRuns) {
  RunConfig rc = config(1e-2, 0.2);
  rc.mode = RunMode::Picard;
  rc.epsilon = 0.02;
  const RunResult r = run(unit_params(), BoundaryDrive::constant(1.0),
                          InitialProfile::constant(0.5), rc);
  EXPECT_EQ(r.status, RunStatus::Completed);
}

TEST(ContractionRatios, SkipsRoundOff) {
  PicardWindowLog log;
  log.distances = {1.0, 0.1, 0.01, 1e-13};
  const auto q = contraction_ratios(log);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_DOUBLE_EQ(q[0], 0.1);
  EXPECT_DOUBLE_EQ(q[1], 0.1);
}

TEST(Windows, Ap2WithFrozenTraceOfAp1ReproducesAp1) {
  // If eta is the AP1 trace itself, the AP2 flux coincides with AP1.
  const ModelParams p = unit_params();
  const SimState init = initial_state(p, InitialProfile::constant(0.3), 40);
  const auto traj = FrontTrajectory::constant(0.0, 1e-2, 20, 1.0);
  const WindowSolution a = solve_ap1_window(traj, p, BoundaryDrive::constant(1.0), init);
  EXPECT_EQ(a.states.size(), 21u);
  EXPECT_EQ(a.trace.values.size(), 21);
  EXPECT_DOUBLE_EQ(a.trace.values[20], a.states[20].u[40]);
  for (const ResidualSummary& r : a.residuals) EXPECT_LE(r.max_relative, 1e-12);
}

TEST(Trajectory, FromRun) {
  const RunResult r = run_sequential(unit_params(), BoundaryDrive::constant(0.0),
                                     InitialProfile::constant(0.0), config(0.1, 1.0));
  const FrontTrajectory t = trajectory_of(r, 0.1);
  EXPECT_EQ(t.steps(), 10);
  EXPECT_DOUBLE_EQ(t.s[10], r.final_state().s);
  EXPECT_NEAR(t.s_t[0], r.states[1].s_t, 1e-12);
}
