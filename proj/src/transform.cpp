#include "frontsim/transform.hpp"

#include <algorithm>
#include <cmath>

namespace frontsim {

void PhysicalProfile::validate() const {
  if (!(s > 0.0)) throw InvalidInput("violated constraint s>0");
  if (z.size() < 2 || z.size() != values.size())
    throw InvalidInput("profile needs matching z/value arrays of length >= 2");
  if (z[0] != 0.0 || z[z.size() - 1] != s)
    throw InvalidInput("profile nodes must span [0, s]");
  for (Eigen::Index k = 1; k < z.size(); ++k) {
    if (!(z[k] > z[k - 1])) throw InvalidInput("profile nodes must increase");
  }
}

double interpolate(const Eigen::Ref<const Eigen::VectorXd>& nodes,
                   const Eigen::Ref<const Eigen::VectorXd>& values, double x) {
  const Eigen::Index n = nodes.size();
  if (x <= nodes[0]) return values[0];
  if (x >= nodes[n - 1]) return values[n - 1];
  const double* begin = nodes.data();
  const auto k = static_cast<Eigen::Index>(std::upper_bound(begin, begin + n, x) - begin) - 1;
  const double w = (x - nodes[k]) / (nodes[k + 1] - nodes[k]);
  return values[k] * (1.0 - w) + values[k + 1] * w;
}

Eigen::VectorXd fixed_grid(Eigen::Index N) {
  Eigen::VectorXd y(N + 1);
  for (Eigen::Index j = 0; j <= N; ++j) y[j] = static_cast<double>(j) / static_cast<double>(N);
  return y;
}

Eigen::VectorXd to_fixed(const PhysicalProfile& profile, Eigen::Index N) {
  profile.validate();
  if (N < 2) throw InvalidInput("violated constraint N>=2");
  const Eigen::VectorXd y = fixed_grid(N);
  Eigen::VectorXd out(N + 1);
  for (Eigen::Index j = 0; j <= N; ++j)
    out[j] = interpolate(profile.z, profile.values, y[j] * profile.s);
  return out;
}

PhysicalProfile to_physical(const SimState& state) {
  state.validate();
  PhysicalProfile p;
  p.s = state.s;
  p.z = fixed_grid(state.grid_size()) * state.s;
  p.values = state.u;
  return p;
}

Eigen::VectorXd initial_fixed_profile(const InitialProfile& u0, double s0,
                                      Eigen::Index N) {
  u0.validate();
  if (u0.values.size() == 1) return Eigen::VectorXd::Constant(N + 1, u0.values[0]);
  const auto K = static_cast<Eigen::Index>(u0.values.size()) - 1;
  PhysicalProfile p;
  p.s = s0;
  p.z = fixed_grid(K) * s0;
  p.values = Eigen::Map<const Eigen::VectorXd>(u0.values.data(), K + 1);
  return to_fixed(p, N);
}

SimState initial_state(const ModelParams& params, const InitialProfile& u0,
                       Eigen::Index N) {
  SimState st;
  st.t = 0.0;
  st.s = params.s0;
  st.u = initial_fixed_profile(u0, params.s0, N);
  st.s_t = params.a0 * (sigma(st.u[N]) - params.alpha * params.s0);
  return st;
}

}  // namespace frontsim
