#ifndef LANE_EMDEN_GREEN_HPP
#define LANE_EMDEN_GREEN_HPP

#include <Eigen/Core>
#include <Eigen/SparseLU>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "lane_emden/elliptic.hpp"

namespace lane_emden {

// ---------------------------------------------------------------------------
// Closed forms on the unit disk (image point y* = y / |y|^2).

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

namespace detail {

template <typename Scalar>
void require_unit_disk(const Vec2<Scalar>& x) {
  if (!(x.squaredNorm() < Scalar(1))) throw OutsideDomain("point outside the unit disk");
}

template <typename Scalar>
constexpr Scalar inv_two_pi() {
  return Scalar(1) / (Scalar(2) * std::numbers::pi_v<Scalar>);
}

}  // namespace detail

/// H(x, y) = (1/2pi) log(|y| |x - y*|); H(x, 0) = 0.
/// Written as (1/4pi) log(|x|^2|y|^2 - 2 x.y + 1) so it is smooth at y = 0.
template <typename Scalar>
Scalar regular_part_disk(const Vec2<Scalar>& x, const Vec2<Scalar>& y) {
  detail::require_unit_disk(x);
  detail::require_unit_disk(y);
  using std::log;
  const Scalar q = x.squaredNorm() * y.squaredNorm() - Scalar(2) * x.dot(y) + Scalar(1);
  return Scalar(0.5) * detail::inv_two_pi<Scalar>() * log(q);
}

template <typename Scalar>
Scalar green_disk(const Vec2<Scalar>& x, const Vec2<Scalar>& y) {
  const Scalar d = (x - y).norm();
  if (!(d > Scalar(0))) throw CoincidentPoints("G(x, y) needs x != y");
  using std::log;
  return regular_part_disk(x, y) - detail::inv_two_pi<Scalar>() * log(d);
}

/// grad_x H(x, y) on the unit disk.
template <typename Scalar>
Vec2<Scalar> grad_regular_part_disk(const Vec2<Scalar>& x, const Vec2<Scalar>& y) {
  detail::require_unit_disk(x);
  detail::require_unit_disk(y);
  const Scalar q = x.squaredNorm() * y.squaredNorm() - Scalar(2) * x.dot(y) + Scalar(1);
  return detail::inv_two_pi<Scalar>() * (y.squaredNorm() * x - y) / q;
}

template <typename Scalar>
Vec2<Scalar> grad_green_disk(const Vec2<Scalar>& x, const Vec2<Scalar>& y) {
  const Vec2<Scalar> d = x - y;
  if (!(d.squaredNorm() > Scalar(0))) throw CoincidentPoints("grad G(x, y) needs x != y");
  return grad_regular_part_disk(x, y) - detail::inv_two_pi<Scalar>() * d / d.squaredNorm();
}

// ---------------------------------------------------------------------------

/// Concentration points with their masses; gamma_i = 8 pi m_i.
struct PeakSet {
  std::vector<Point> points;
  std::vector<double> masses;

  std::size_t size() const { return points.size(); }
  double gamma(std::size_t i) const { return 8.0 * std::numbers::pi * masses[i]; }
};

/// G, H and their first-slot gradients for a domain.
///
/// Analytic mode serves disks of any radius from the unit-disk image formula.
/// Numeric mode solves -Delta_h H(., y) = 0 with boundary data
/// (1/2pi) log|x - y| once per source point and caches the field.
class GreenEvaluator {
 public:
  enum class Mode { kAnalytic, kNumeric };

  static GreenEvaluator analytic(const Domain& disk);
  static GreenEvaluator numeric(GridPtr grid);

  Mode mode() const { return mode_; }
  const Domain& domain() const { return domain_; }

  double G(const Point& x, const Point& y) const;
  double H(const Point& x, const Point& y) const;
  Point grad_G(const Point& x, const Point& y) const;
  Point grad_H(const Point& x, const Point& y) const;
  /// grad_x H(y, y): first-slot gradient on the diagonal.
  Point grad_H_diag(const Point& y) const { return grad_H(y, y); }

  /// Robin function R(x) = H(x, x) and its gradient (2 grad_x H(x, x)).
  double robin(const Point& x) const { return H(x, x); }
  Point robin_gradient(const Point& x) const { return 2.0 * grad_H(x, x); }

  /// Numeric mode: the cached (G, H) fields for source y.
  std::pair<Field, Field> fields(const Point& y) const;

 private:
  struct NumericState;
  GreenEvaluator(Mode mode, Domain domain) : mode_(mode), domain_(std::move(domain)) {}
  const Field& h_field(const Point& y) const;
  double h_numeric(const Point& x, const Point& y) const;
  void require_interior(const Point& x) const;

  Mode mode_;
  Domain domain_;
  double radius_ = 1.0;
  std::shared_ptr<NumericState> numeric_;
};

/// (G_field, H_field) for source y by harmonic extension on the grid.
std::pair<Field, Field> green_numeric(const GridPtr& grid, const Point& y);

/// r_i = m_i grad_x H(x_i, x_i) + sum_{l != i} m_l grad_x G(x_i, x_l).
std::vector<Point> concentration_residual(const GreenEvaluator& green, const PeakSet& peaks);

struct RobinSample {
  Point x;
  double value;
  Point gradient;
};

/// R(x) = H(x, x) on an n x n lattice over the domain's bounding box,
/// keeping points at least `margin` from the boundary.
std::vector<RobinSample> robin_landscape(const GreenEvaluator& green, int n, double margin);

}  // namespace lane_emden

#endif  // LANE_EMDEN_GREEN_HPP
