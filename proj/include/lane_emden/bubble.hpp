#ifndef LANE_EMDEN_BUBBLE_HPP
#define LANE_EMDEN_BUBBLE_HPP

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace lane_emden {

/// Radial entire solution U = -2 log(1 + |x|^2/8) of -Delta U = e^U with
/// total mass 8 pi.
struct Bubble {
  template <typename Scalar>
  static Scalar value_radial(Scalar rho) {
    using std::log1p;
    return Scalar(-2) * log1p(rho * rho / Scalar(8));
  }

  template <typename Derived>
  static typename Derived::Scalar value(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    using std::log1p;
    return Scalar(-2) * log1p(x.squaredNorm() / Scalar(8));
  }

  /// e^U = (1 + rho^2/8)^{-2}
  template <typename Scalar>
  static Scalar density_radial(Scalar rho) {
    const Scalar s = Scalar(1) + rho * rho / Scalar(8);
    return Scalar(1) / (s * s);
  }

  /// dU/drho
  template <typename Scalar>
  static Scalar derivative_radial(Scalar rho) {
    return Scalar(-4) * rho / (Scalar(8) + rho * rho);
  }

  /// Integral of e^U over B_R(0), 8 pi R^2 / (8 + R^2).
  template <typename Scalar>
  static Scalar mass(Scalar R) {
    return Scalar(8) * std::numbers::pi_v<Scalar> * R * R / (Scalar(8) + R * R);
  }

  template <typename Scalar = double>
  static constexpr Scalar total_mass() {
    return Scalar(8) * std::numbers::pi_v<Scalar>;
  }
};

}  // namespace lane_emden

#endif  // LANE_EMDEN_BUBBLE_HPP
