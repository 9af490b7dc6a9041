#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>

namespace frontsim {

/// Tridiagonal rows lower_i x_{i-1} + diag_i x_i + upper_i x_{i+1} = rhs_i.
template <class Scalar>
struct Tridiagonal {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector lower, diag, upper, rhs;

  explicit Tridiagonal(Eigen::Index n)
      : lower(Vector::Zero(n)), diag(Vector::Zero(n)),
        upper(Vector::Zero(n)), rhs(Vector::Zero(n)) {}

  [[nodiscard]] Eigen::Index size() const { return diag.size(); }
};

/// Thomas forward sweep over rows [0, last). Afterwards
/// x_i = rhs'_i - upper'_i x_{i+1} for i < last. Returns false when a pivot
/// vanishes relative to its row.
template <class Scalar>
bool forward_eliminate(Tridiagonal<Scalar>& sys, Eigen::Index last) {
  for (Eigen::Index i = 0; i < last; ++i) {
    Scalar pivot = sys.diag[i];
    if (i > 0) {
      pivot -= sys.lower[i] * sys.upper[i - 1];
      sys.rhs[i] -= sys.lower[i] * sys.rhs[i - 1];
    }
    const Scalar row_scale = std::abs(sys.diag[i]) + std::abs(sys.lower[i]) +
                             std::abs(sys.upper[i]);
    if (!(std::abs(pivot) > Scalar(1e-14) * row_scale)) return false;
    sys.upper[i] /= pivot;
    sys.rhs[i] /= pivot;
    sys.diag[i] = Scalar(1);
  }
  return true;
}

/// Given x_last, recovers x_0..x_{last-1} from an eliminated system.
template <class Scalar>
void back_substitute(const Tridiagonal<Scalar>& sys, Eigen::Index last,
                     Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) {
  for (Eigen::Index i = last - 1; i >= 0; --i)
    x[i] = sys.rhs[i] - sys.upper[i] * x[i + 1];
}

/// Full linear solve; std::nullopt when singular.
template <class Scalar>
std::optional<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> solve_tridiagonal(
    Tridiagonal<Scalar> sys) {
  const Eigen::Index n = sys.size();
  const Eigen::Index last = n - 1;
  if (!forward_eliminate(sys, last)) return std::nullopt;
  const Scalar pivot = sys.diag[last] - sys.lower[last] * sys.upper[last - 1];
  if (!(std::abs(pivot) > Scalar(1e-14) * (std::abs(sys.diag[last]) + std::abs(sys.lower[last]))))
    return std::nullopt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(n);
  x[last] = (sys.rhs[last] - sys.lower[last] * sys.rhs[last - 1]) / pivot;
  back_substitute(sys, last, x);
  return x;
}

}  // namespace frontsim
