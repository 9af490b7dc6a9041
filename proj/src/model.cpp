#include "frontsim/model.hpp"

#include <cmath>
#include <limits>

namespace frontsim {

namespace {

void require(bool ok, const char* constraint) {
  if (!ok) throw InvalidInput(std::string("violated constraint ") + constraint);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void ModelParams::validate() const {
  require(finite(a0) && a0 > 0.0, "a_0>0");
  require(finite(alpha) && alpha >= 0.0, "alpha>=0");
  require(finite(beta) && beta > 0.0, "beta>0");
  require(finite(gamma) && gamma > 0.0, "gamma>0");
  require(finite(s0) && s0 > 0.0, "s_0>0");
  require(finite(T) && T > 0.0, "T>0");
}

BoundaryDrive::BoundaryDrive(std::vector<double> times,
                             std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  require(!times_.empty() && times_.size() == values_.size(),
          "drive knots: one value per time, at least one knot");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    require(finite(times_[i]) && finite(values_[i]), "drive knots finite");
    require(values_[i] >= 0.0, "b>=0");
    if (i > 0) require(times_[i] > times_[i - 1], "drive knot times increasing");
  }
}

BoundaryDrive BoundaryDrive::constant(double b) {
  return BoundaryDrive({0.0}, {b});
}

double BoundaryDrive::value(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return values_[k] * (1.0 - w) + values_[k + 1] * w;
}

double BoundaryDrive::derivative(double t) const {
  if (t < times_.front() || t >= times_.back()) return 0.0;
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
  return (values_[k + 1] - values_[k]) / (times_[k + 1] - times_[k]);
}

double BoundaryDrive::max_value(double horizon) const {
  double m = std::max(value(0.0), value(horizon));
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] > 0.0 && times_[i] < horizon) m = std::max(m, values_[i]);
  }
  return m;
}

namespace {

// Sum over knot intervals of overlap([t_k, t_k+1], [0, horizon]) * f(slope).
template <class F>
double integrate_slopes(const std::vector<double>& t,
                        const std::vector<double>& v, double horizon, F f) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double lo = std::max(t[k], 0.0);
    const double hi = std::min(t[k + 1], horizon);
    if (hi <= lo) continue;
    const double slope = (v[k + 1] - v[k]) / (t[k + 1] - t[k]);
    acc += (hi - lo) * f(slope);
  }
  return acc;
}

}  // namespace

double BoundaryDrive::derivative_l1(double horizon) const {
  return integrate_slopes(times_, values_, horizon,
                          [](double m) { return std::abs(m); });
}

double BoundaryDrive::derivative_l2_squared(double horizon) const {
  return integrate_slopes(times_, values_, horizon,
                          [](double m) { return m * m; });
}

bool BoundaryDrive::is_constant() const {
  return std::all_of(values_.begin(), values_.end(),
                     [&](double v) { return v == values_.front(); });
}

void InitialProfile::validate() const {
  require(!values.empty(), "u_0 has at least one sample");
  for (double v : values) {
    require(finite(v), "u_0 in L^infinity");
    require(v >= 0.0, "u_0>=0");
  }
}

double InitialProfile::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

void SimState::validate() const {
  require(s > 0.0, "s>0");
  require(u.size() >= 3, "state has at least 3 nodes");
  require(u.allFinite(), "state values finite");
}

Equilibrium equilibrium(const ModelParams& params, double b_const) {
  require(params.alpha > 0.0, "alpha>0 (no finite equilibrium for alpha=0)");
  require(b_const > 0.0, "b>0 (equilibrium front would be 0)");
  return {b_const / (params.gamma * params.alpha), b_const / params.gamma};
}

double b_star(const ModelParams& params, const BoundaryDrive& drive,
              const InitialProfile& u0) {
  return std::max(drive.max_value(params.T), params.gamma * u0.max_value());
}

}  // namespace frontsim
