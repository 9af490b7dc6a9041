#include "frontsim/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace frontsim;

TEST(FrontCap, WorkedCaseUnitData) {
  // s0 = alpha = beta = gamma = b = 1, u0 = 1: M = 1/6 + sqrt(2)/3,
  // M_front = (12 M)^(1/3).
  const ModelParams p{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const AprioriBounds b =
      apriori_front_cap(p, BoundaryDrive::constant(1.0), InitialProfile::constant(1.0));
  EXPECT_NEAR(b.M_front, 1.97102, 1e-4);
  EXPECT_NEAR(b.M_front, std::cbrt(12.0 * (1.0 / 6.0 + std::sqrt(2.0) / 3.0)), 1e-14);
  EXPECT_NEAR(b.eta0, std::cbrt(0.25), 1e-15);
  EXPECT_EQ(b.N_T, 0.0);
  EXPECT_DOUBLE_EQ(b.u_star, b.M_front);
}

TEST(FrontCap, WorkedCaseZeroProfile) {
  // |u0 - b/gamma|_H^2 = 1 adds s0/2 to M.
  const ModelParams p{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const AprioriBounds b =
      apriori_front_cap(p, BoundaryDrive::constant(1.0), InitialProfile::constant(0.0));
  EXPECT_NEAR(b.M_front, std::cbrt(12.0 * (0.5 + 1.0 / 6.0 + std::sqrt(2.0) / 3.0)), 1e-14);
  EXPECT_NEAR(b.M_front, 2.390288, 1e-6);
}

TEST(FrontCap, EtaChoicesSolveTheirEquations) {
  for (double alpha : {0.1, 0.5, 1.0, 3.0}) {
    FrontCapInputs in;
    in.alpha = alpha;
    in.b_star = 1.0;
    in.bt_l1 = 0.5;
    in.bt_l2_sq = 0.3;
    const AprioriBounds b = front_cap(in);
    const double a2 = alpha * alpha;
    EXPECT_NEAR(a2 / 6.0 - std::pow(b.eta0, 3) / 3.0, a2 / 12.0, 1e-14);
    const double e = b.eta_absorb;
    EXPECT_NEAR(e * e * e / 3.0 + 2.0 * std::pow(e, 1.5) / 3.0, a2 / 24.0, 1e-14);
  }
}

TEST(FrontCap, CapSatisfiesTheCubicInequality) {
  // With b_t != 0 the cap must satisfy
  // alpha^2/12 l^3 >= M (1 + N/(2 gamma^2)) + A l + B l^2.
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(0.1, 2.0);
  for (int i = 0; i < 200; ++i) {
    FrontCapInputs in{d(rng), d(rng), d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
    const AprioriBounds b = front_cap(in);
    const double g2 = in.gamma * in.gamma;
    const double amp = 1.0 + b.N_T / (2.0 * g2);
    const double A = in.b_star / g2 * amp * in.bt_l1;
    const double B = amp / (2.0 * in.beta * g2 * in.gamma) * in.bt_l2_sq;
    const double l = b.M_front;
    EXPECT_GE(in.alpha * in.alpha / 12.0 * l * l * l * (1.0 + 1e-12),
              b.M_eta0 * amp + A * l + B * l * l);
  }
}

TEST(FrontCap, MonotoneInTheData) {
  FrontCapInputs in;
  in.b_star = 1.0;
  const double base = front_cap(in).M_front;
  FrontCapInputs more = in;
  more.s0 = 2.0;
  EXPECT_GT(front_cap(more).M_front, base);
  more = in;
  more.b_star = 2.0;
  EXPECT_GT(front_cap(more).M_front, base);
  more = in;
  more.bt_l2_sq = 0.1;
  more.bt_l1 = 0.1;
  EXPECT_GT(front_cap(more).M_front, base);
}

TEST(FrontCap, RejectsAlphaZero) {
  ModelParams p;
  p.alpha = 0.0;
  EXPECT_THROW(apriori_front_cap(p, BoundaryDrive::constant(1.0), InitialProfile::constant(1.0)),
               InvalidInput);
}

TEST(Norms, TrapezoidAndExactGradient) {
  const Eigen::Index N = 10;
  Eigen::VectorXd y(N + 1);
  for (Eigen::Index j = 0; j <= N; ++j) y[j] = double(j) / N;
  EXPECT_NEAR(h_norm_squared(Eigen::VectorXd::Constant(N + 1, 3.0)), 9.0, 1e-14);
  // Trapezoid of y^2: 1/3 + h^2/6.
  EXPECT_NEAR(h_norm_squared(y), 1.0 / 3.0 + 0.01 / 6.0, 1e-14);
  EXPECT_NEAR(gradient_norm_squared(2.0 * y), 4.0, 1e-13);
  EXPECT_EQ(gradient_norm_squared(Eigen::VectorXd::Ones(N + 1)), 0.0);
}

TEST(Energy, AccumulatesDissipation) {
  std::vector<SimState> states;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd u(3);
    u << 0.0, 0.5, 1.0;  // |u|_H^2 = 0.25 + 0.125 = 0.375, |u_y|^2 = 1
    states.push_back({0.1 * k, 1.0, 0.0, u});
  }
  const EnergySeries e = energy_monitor(states);
  EXPECT_NEAR(e.E[0], 0.375, 1e-15);
  EXPECT_NEAR(e.E[2], 0.375 + 0.2, 1e-15);
  EXPECT_FALSE(e.growth_warning);
}

TEST(Energy, GrowthWarning) {
  EXPECT_TRUE(energy_doubles_within_unit_time({0.0, 0.5, 1.0}, {1.0, 1.5, 2.1}));
  EXPECT_FALSE(energy_doubles_within_unit_time({0.0, 0.5, 2.0}, {1.0, 1.5, 2.1}));
  EXPECT_FALSE(energy_doubles_within_unit_time({0.0, 1.0}, {1.0, 2.0}));
}
