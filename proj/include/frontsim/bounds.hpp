#pragma once

#include "frontsim/model.hpp"

#include <Eigen/Core>

#include <vector>

namespace frontsim {

/// Explicit a-priori constants for a run on [0, T].
///
/// M_front caps s(t) on [0, T]; u_star = max(alpha M_front, b*/gamma) caps
/// the concentration. J caps are the bounds on J1..J3 evaluated at
/// l = M_front.
struct AprioriBounds {
  double eta0 = 0.0;        // (alpha^2/4)^(1/3): alpha^2/6 - eta0^3/3 = alpha^2/12
  double eta_absorb = 0.0;  // second Young exponent, 0 when b_t vanishes
  double M_eta0 = 0.0;
  double N_T = 0.0;
  double J1_cap = 0.0;
  double J2_cap = 0.0;
  double J3_cap = 0.0;
  double M_front = 0.0;
  double u_star = 0.0;
  double b_star = 0.0;
};

/// Scalar inputs of the front cap, separated so the chain can be studied
/// on its own.
struct FrontCapInputs {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double s0 = 1.0;
  double b_star = 0.0;
  double initial_deviation_sq = 0.0;  // |u~0 - b(0)/gamma|_H^2
  double bt_l1 = 0.0;                 // |b_t|_{L1(0,T)}
  double bt_l2_sq = 0.0;              // |b_t|^2_{L2(0,T)}
};

AprioriBounds front_cap(const FrontCapInputs& in);

/// Builds FrontCapInputs from the model data and evaluates the cap.
/// Throws InvalidInput for alpha = 0 (no cap exists).
AprioriBounds apriori_front_cap(const ModelParams& params,
                                const BoundaryDrive& drive,
                                const InitialProfile& u0);

/// Trapezoid |v|_H^2 on a uniform grid of [0, 1].
double h_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Trapezoid-free |v_y|_H^2 for the piecewise-linear interpolant (exact).
double gradient_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& v);

struct EnergySeries {
  std::vector<double> t;
  std::vector<double> E;
  bool growth_warning = false;
};

/// E(t_n) = |u^n|_H^2 + sum_{m<=n} (t_m - t_{m-1}) |u^m_y|_H^2, with a
/// warning when E more than doubles within any unit time interval.
EnergySeries energy_monitor(const std::vector<SimState>& states);

/// Incremental form used by the coupler.
class EnergyAccumulator {
 public:
  double push(const SimState& state);
  [[nodiscard]] double dissipation() const { return dissipation_; }

 private:
  bool started_ = false;
  double last_t_ = 0.0;
  double dissipation_ = 0.0;
};

/// True when some E_j > 2 E_i with 0 < t_j - t_i <= 1.
bool energy_doubles_within_unit_time(const std::vector<double>& t,
                                     const std::vector<double>& E);

}  // namespace frontsim
