#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace frontsim {

/// Raised when a parameter, drive, or profile violates its admissibility
/// constraint. The message names the violated constraint, e.g. "s_0>0".
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical constants of the penetration model plus the horizon T.
///
/// alpha = 0 is accepted: it is the monotone regime where the front grows
/// without bound. Everything else must be strictly positive.
struct ModelParams {
  double a0 = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double s0 = 1.0;
  double T = 1.0;

  /// Throws InvalidInput naming the first violated constraint.
  void validate() const;

  /// Front positions at or below this are treated as collapse.
  [[nodiscard]] double s_min() const { return 1e-8 * s0; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Ambient concentration b(t), piecewise linear between knots and held
/// constant outside them. The derivative is the exact piecewise-constant
/// slope, so the L1/L2 norms of b_t are exact.
class BoundaryDrive {
 public:
  BoundaryDrive() = default;
  /// Knots must have strictly increasing times and non-negative values.
  BoundaryDrive(std::vector<double> times, std::vector<double> values);

  static BoundaryDrive constant(double b);

  [[nodiscard]] double value(double t) const;
  /// Slope on the interval containing t (right-continuous at knots);
  /// zero outside the knot range.
  [[nodiscard]] double derivative(double t) const;

  [[nodiscard]] double max_value(double horizon) const;
  [[nodiscard]] double derivative_l1(double horizon) const;
  /// |b_t|^2 in L2(0, horizon).
  [[nodiscard]] double derivative_l2_squared(double horizon) const;
  [[nodiscard]] bool is_constant() const;

  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  friend bool operator==(const BoundaryDrive&, const BoundaryDrive&) = default;

 private:
  std::vector<double> times_{0.0};
  std::vector<double> values_{0.0};
};

/// Samples of u0 at uniformly spaced physical points z_k = k s0 / (K-1).
/// A single sample denotes a constant profile.
struct InitialProfile {
  std::vector<double> values{0.0};

  static InitialProfile constant(double c) { return InitialProfile{{c}}; }

  void validate() const;
  [[nodiscard]] double max_value() const;

  friend bool operator==(const InitialProfile&, const InitialProfile&) = default;
};

/// Fixed-domain state: concentration at y_j = j/N plus front data.
struct SimState {
  double t = 0.0;
  double s = 1.0;
  double s_t = 0.0;
  Eigen::VectorXd u;

  [[nodiscard]] Eigen::Index grid_size() const { return u.size() - 1; }
  void validate() const;
};

/// The positive part max(r, 0).
template <class Scalar>
constexpr Scalar sigma(Scalar r) {
  return r >= Scalar(0) ? r : Scalar(0);
}

/// Semismooth derivative of sigma with the kink value taken as 0.
template <class Scalar>
constexpr Scalar sigma_prime(Scalar r) {
  return r > Scalar(0) ? Scalar(1) : Scalar(0);
}

/// Sup bound on the concentration: max(alpha * l, b_star / gamma).
template <class Scalar>
constexpr Scalar u_star(Scalar alpha, Scalar l, Scalar b_star, Scalar gamma) {
  return std::max(alpha * l, b_star / gamma);
}

struct Equilibrium {
  double s_inf = 0.0;
  double u_inf = 0.0;
};

/// Stationary state for a constant drive: u = b/gamma, s = b/(gamma alpha).
Equilibrium equilibrium(const ModelParams& params, double b_const);

/// b* = max(max_[0,T] b, gamma * max u0).
double b_star(const ModelParams& params, const BoundaryDrive& drive,
              const InitialProfile& u0);

}  // namespace frontsim
