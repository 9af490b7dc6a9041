#include "frontsim/bounds.hpp"

#include "frontsim/transform.hpp"

#include <cmath>

namespace frontsim {

AprioriBounds front_cap(const FrontCapInputs& in) {
  if (!(in.alpha > 0.0))
    throw InvalidInput("violated constraint alpha>0 (no front cap for alpha=0)");
  const double a2 = in.alpha * in.alpha;
  const double g2 = in.gamma * in.gamma;

  AprioriBounds out;
  out.b_star = in.b_star;
  out.eta0 = std::cbrt(a2 / 4.0);
  const double eta0_32 = std::pow(out.eta0, 1.5);
  out.M_eta0 = 0.5 * in.s0 * in.initial_deviation_sq +
               a2 * in.s0 * in.s0 * in.s0 / 6.0 +
               2.0 * std::pow(in.b_star * in.b_star / (2.0 * g2), 1.5) / (3.0 * eta0_32);
  out.N_T = 12.0 / a2 * in.bt_l2_sq * std::exp(6.0 / (g2 * a2) * in.bt_l2_sq);

  // alpha^2/12 l^3 <= M (1 + N/(2 gamma^2)) + A l + B l^2
  const double amplification = 1.0 + out.N_T / (2.0 * g2);
  const double A = in.b_star / g2 * amplification * in.bt_l1;
  const double B = amplification / (2.0 * in.beta * g2 * in.gamma) * in.bt_l2_sq;
  const double base = out.M_eta0 * amplification;

  if (A == 0.0 && B == 0.0) {
    out.M_front = std::cbrt(12.0 * base / a2);
  } else {
    // eta^3/3 + 2 eta^{3/2}/3 = alpha^2/24 with x = eta^{3/2}.
    const double x = -1.0 + std::sqrt(1.0 + a2 / 8.0);
    out.eta_absorb = std::cbrt(x * x);
    const double rhs = base + 2.0 / (3.0 * x) * std::pow(A, 1.5) +
                       std::pow(B, 3.0) / (3.0 * x * x);
    out.M_front = std::cbrt(24.0 * rhs / a2);
  }

  const double l = out.M_front;
  out.J2_cap = l * in.bt_l1;
  out.J3_cap = l * l * in.bt_l2_sq;
  out.J1_cap = out.N_T * out.M_eta0 +
               out.N_T * (in.b_star / g2 * out.J2_cap +
                          out.J3_cap / (2.0 * in.beta * g2 * in.gamma));
  out.u_star = u_star(in.alpha, out.M_front, in.b_star, in.gamma);
  return out;
}

double h_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index n = v.size() - 1;
  if (n <= 0) return v.size() == 1 ? v[0] * v[0] : 0.0;
  const double h = 1.0 / static_cast<double>(n);
  return h * (v.squaredNorm() - 0.5 * (v[0] * v[0] + v[n] * v[n]));
}

double gradient_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index n = v.size() - 1;
  if (n <= 0) return 0.0;
  const double h = 1.0 / static_cast<double>(n);
  return (v.tail(n) - v.head(n)).squaredNorm() / h;
}

AprioriBounds apriori_front_cap(const ModelParams& params,
                                const BoundaryDrive& drive,
                                const InitialProfile& u0) {
  params.validate();
  u0.validate();
  FrontCapInputs in;
  in.alpha = params.alpha;
  in.beta = params.beta;
  in.gamma = params.gamma;
  in.s0 = params.s0;
  in.b_star = b_star(params, drive, u0);
  Eigen::VectorXd dev =
      Eigen::Map<const Eigen::VectorXd>(u0.values.data(),
                                        static_cast<Eigen::Index>(u0.values.size()));
  dev.array() -= drive.value(0.0) / params.gamma;
  in.initial_deviation_sq = h_norm_squared(dev);
  in.bt_l1 = drive.derivative_l1(params.T);
  in.bt_l2_sq = drive.derivative_l2_squared(params.T);
  return front_cap(in);
}

double EnergyAccumulator::push(const SimState& state) {
  if (started_) dissipation_ += (state.t - last_t_) * gradient_norm_squared(state.u);
  started_ = true;
  last_t_ = state.t;
  return h_norm_squared(state.u) + dissipation_;
}

bool energy_doubles_within_unit_time(const std::vector<double>& t,
                                     const std::vector<double>& E) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size() && t[j] - t[i] <= 1.0; ++j) {
      if (E[j] > 2.0 * E[i]) return true;
    }
  }
  return false;
}

EnergySeries energy_monitor(const std::vector<SimState>& states) {
  EnergySeries out;
  EnergyAccumulator acc;
  out.t.reserve(states.size());
  out.E.reserve(states.size());
  for (const SimState& st : states) {
    out.t.push_back(st.t);
    out.E.push_back(acc.push(st));
  }
  out.growth_warning = energy_doubles_within_unit_time(out.t, out.E);
  return out;
}

}  // namespace frontsim
