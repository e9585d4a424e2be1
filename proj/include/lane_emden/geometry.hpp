#ifndef LANE_EMDEN_GEOMETRY_HPP
#define LANE_EMDEN_GEOMETRY_HPP

#include <Eigen/Core>

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lane_emden/errors.hpp"

namespace lane_emden {

using Point = Eigen::Vector2d;

struct Rectangle {
  double width;
  double height;
};

struct Disk {
  double radius;
};

struct Annulus {
  double r_inner;
  double r_outer;
};

/// Open bounded planar domain. Rectangles are anchored at the origin
/// ([0,w]x[0,h]); disks and annuli are centered at the origin.
class Domain {
 public:
  using Shape = std::variant<Rectangle, Disk, Annulus>;

  static Domain rectangle(double width, double height);
  static Domain unit_square() { return rectangle(1.0, 1.0); }
  static Domain disk(double radius);
  static Domain annulus(double r_inner, double r_outer);

  const Shape& shape() const { return shape_; }
  bool is_disk() const { return std::holds_alternative<Disk>(shape_); }
  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }

  bool contains(const Point& x) const;
  /// Euclidean distance from an interior point to the boundary.
  double boundary_distance(const Point& x) const;
  /// Distance from x along +e_axis (sign = +1) or -e_axis (sign = -1) to
  /// the first boundary crossing; +inf if the ray never leaves.
  double ray_exit(const Point& x, int axis, int sign) const;

  double area() const;
  double diameter() const;
  /// Narrowest feature size; the lattice spacing must stay below it.
  double feature_size() const;
  Point center() const;
  std::string name() const;

  friend bool operator==(const Domain& a, const Domain& b);

 private:
  explicit Domain(Shape s) : shape_(s) {}
  Shape shape_;
};

enum Direction : int { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };

/// Uniform lattice restricted to a domain, with Shortley-Weller data.
///
/// Node (i, j) sits at origin + h * (i, j). Every interior node carries,
/// for each axis direction, either the index of its interior neighbor
/// (theta = 1) or -1 together with the fractional distance theta in (0, 1]
/// at which the segment towards that neighbor meets the boundary.
class Grid {
 public:
  const Domain& domain() const { return domain_; }
  double h() const { return h_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Point& origin() const { return origin_; }

  Point point(int k) const {
    return origin_ + h_ * Point(nodes_[k][0], nodes_[k][1]);
  }
  const std::array<int, 2>& lattice(int k) const { return nodes_[k]; }
  /// Interior index of lattice node (i, j), or -1.
  int index(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
    return lookup_[static_cast<std::size_t>(j) * nx_ + i];
  }
  int neighbor(int k, Direction d) const { return neighbors_[k][d]; }
  double theta(int k, Direction d) const { return thetas_[k][d]; }
  /// Midpoint-rule weight (h^2 for every interior node).
  double quad_weight(int) const { return h_ * h_; }
  bool touches_boundary(int k) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.domain_ == b.domain_ && a.h_ == b.h_;
  }

 private:
  friend Grid build_grid(const Domain& domain, double h);
  Grid() = default;

  Domain domain_ = Domain::unit_square();
  double h_ = 0.0;
  Point origin_ = Point::Zero();
  int nx_ = 0;
  int ny_ = 0;
  std::vector<int> lookup_;
  std::vector<std::array<int, 2>> nodes_;
  std::vector<std::array<int, 4>> neighbors_;
  std::vector<std::array<double, 4>> thetas_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws BadSpacing or EmptyGrid.
Grid build_grid(const Domain& domain, double h);
GridPtr make_grid(const Domain& domain, double h);

/// Scalar field on the interior nodes of a grid, zero on the boundary.
class Field {
 public:
  Field(GridPtr grid, Eigen::VectorXd values);
  static Field zeros(GridPtr grid);
  template <typename Fn>
  static Field sample(GridPtr grid, Fn&& fn) {
    Eigen::VectorXd v(grid->size());
    for (int k = 0; k < grid->size(); ++k) v[k] = fn(grid->point(k));
    return Field(std::move(grid), std::move(v));
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int k) const { return values_[k]; }
  int size() const { return static_cast<int>(values_.size()); }
  double max() const { return values_.size() ? values_.maxCoeff() : 0.0; }
  double min() const { return values_.size() ? values_.minCoeff() : 0.0; }
  double sup_norm() const {
    return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  }

  /// Bilinear interpolation; exterior lattice corners read as 0.
  double value_at(const Point& x) const;
  /// Gradient at a node: centered differences between interior neighbors,
  /// one-sided Shortley-Weller differences towards the boundary.
  Point node_gradient(int k) const;
  /// Off-lattice gradient from centered differences of value_at (step h).
  Point gradient_at(const Point& x) const;

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

Field operator+(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

/// Midpoint-rule integral of f (sum of quad_weight * f).
double integrate(const Grid& grid, const Field& f);
inline double integrate(const Field& f) { return integrate(f.grid(), f); }

/// Integral of |grad f|^2 from difference quotients along every lattice
/// segment (including the Shortley-Weller segments ending on the boundary),
/// each weighted by its length times the transverse spacing h.
double grad_norm_sq_integral(const Grid& grid, const Field& f);
inline double grad_norm_sq_integral(const Field& f) {
  return grad_norm_sq_integral(f.grid(), f);
}

}  // namespace lane_emden

#endif  // LANE_EMDEN_GEOMETRY_HPP
