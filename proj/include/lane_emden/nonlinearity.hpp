#ifndef LANE_EMDEN_NONLINEARITY_HPP
#define LANE_EMDEN_NONLINEARITY_HPP

#include <Eigen/Core>

#include <cmath>

namespace lane_emden {

/// |u|^{p-1} u, evaluated as exp(p log|u|) to stay finite for large p.
template <typename Scalar>
Scalar signed_power(Scalar u, Scalar p) {
  using std::exp;
  using std::log;
  if (u > Scalar(0)) return exp(p * log(u));
  if (u < Scalar(0)) return -exp(p * log(-u));
  return Scalar(0);
}

/// p |u|^{p-1}, the derivative of signed_power.
template <typename Scalar>
Scalar signed_power_derivative(Scalar u, Scalar p) {
  using std::exp;
  using std::log;
  if (u == Scalar(0)) return Scalar(0);
  using std::abs;
  return p * exp((p - Scalar(1)) * log(abs(u)));
}

/// Coefficient-wise |u|^{p-1} u over an Eigen expression.
template <typename Derived>
auto signed_power(const Eigen::MatrixBase<Derived>& u, typename Derived::Scalar p) {
  return u.unaryExpr(
      [p](typename Derived::Scalar v) { return signed_power(v, p); });
}

template <typename Derived>
auto signed_power_derivative(const Eigen::MatrixBase<Derived>& u,
                             typename Derived::Scalar p) {
  return u.unaryExpr(
      [p](typename Derived::Scalar v) { return signed_power_derivative(v, p); });
}

}  // namespace lane_emden

#endif  // LANE_EMDEN_NONLINEARITY_HPP
