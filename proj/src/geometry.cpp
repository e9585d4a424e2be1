#include "lane_emden/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lane_emden {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Exit distance from coordinate q (moving with the given sign) out of a
// centered circle of radius R, at transverse offset c.
double circle_exit(double q, double c, double radius, int sign) {
  const double w2 = radius * radius - c * c;
  if (w2 <= 0.0) return 0.0;
  return std::sqrt(w2) - sign * q;
}

// Distance until the ray enters the hole of radius r, or +inf.
double hole_entry(double q, double c, double r, int sign) {
  const double w2 = r * r - c * c;
  if (w2 <= 0.0) return kInf;
  const double w = std::sqrt(w2);
  if (sign > 0 && q <= -w) return -w - q;
  if (sign < 0 && q >= w) return q - w;
  return kInf;
}

}  // namespace

Domain Domain::rectangle(double width, double height) {
  if (!(width > 0.0) || !(height > 0.0))
    throw BadDomain("rectangle sides must be positive");
  return Domain(Rectangle{width, height});
}

Domain Domain::disk(double radius) {
  if (!(radius > 0.0)) throw BadDomain("disk radius must be positive");
  return Domain(Disk{radius});
}

Domain Domain::annulus(double r_inner, double r_outer) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner))
    throw BadDomain("annulus needs 0 < r_inner < r_outer");
  return Domain(Annulus{r_inner, r_outer});
}

bool Domain::contains(const Point& x) const {
  return std::visit(
      Overloaded{
          [&](const Rectangle& r) {
            return x.x() > 0.0 && x.x() < r.width && x.y() > 0.0 &&
                   x.y() < r.height;
          },
          [&](const Disk& d) { return x.squaredNorm() < d.radius * d.radius; },
          [&](const Annulus& a) {
            const double r2 = x.squaredNorm();
            return r2 > a.r_inner * a.r_inner && r2 < a.r_outer * a.r_outer;
          }},
      shape_);
}

double Domain::boundary_distance(const Point& x) const {
  return std::visit(
      Overloaded{[&](const Rectangle& r) {
                   return std::min({x.x(), r.width - x.x(), x.y(),
                                    r.height - x.y()});
                 },
                 [&](const Disk& d) { return d.radius - x.norm(); },
                 [&](const Annulus& a) {
                   const double r = x.norm();
                   return std::min(r - a.r_inner, a.r_outer - r);
                 }},
      shape_);
}

double Domain::ray_exit(const Point& x, int axis, int sign) const {
  const double q = x[axis];
  const double c = x[1 - axis];
  return std::visit(
      Overloaded{[&](const Rectangle& r) {
                   const double len = axis == 0 ? r.width : r.height;
                   return sign > 0 ? len - q : q;
                 },
                 [&](const Disk& d) {
                   return circle_exit(q, c, d.radius, sign);
                 },
                 [&](const Annulus& a) {
                   return std::min(circle_exit(q, c, a.r_outer, sign),
                                   hole_entry(q, c, a.r_inner, sign));
                 }},
      shape_);
}

double Domain::area() const {
  return std::visit(
      Overloaded{[](const Rectangle& r) { return r.width * r.height; },
                 [](const Disk& d) { return M_PI * d.radius * d.radius; },
                 [](const Annulus& a) {
                   return M_PI * (a.r_outer * a.r_outer - a.r_inner * a.r_inner);
                 }},
      shape_);
}

double Domain::diameter() const {
  return std::visit(
      Overloaded{[](const Rectangle& r) { return std::hypot(r.width, r.height); },
                 [](const Disk& d) { return 2.0 * d.radius; },
                 [](const Annulus& a) { return 2.0 * a.r_outer; }},
      shape_);
}

double Domain::feature_size() const {
  return std::visit(
      Overloaded{[](const Rectangle& r) { return std::min(r.width, r.height); },
                 [](const Disk& d) { return d.radius; },
                 [](const Annulus& a) { return a.r_outer - a.r_inner; }},
      shape_);
}

Point Domain::center() const {
  if (const auto* r = std::get_if<Rectangle>(&shape_))
    return Point(0.5 * r->width, 0.5 * r->height);
  return Point::Zero();
}

std::string Domain::name() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{[&](const Rectangle& r) {
                          os << "rectangle(" << r.width << "x" << r.height << ")";
                        },
                        [&](const Disk& d) { os << "disk(" << d.radius << ")"; },
                        [&](const Annulus& a) {
                          os << "annulus(" << a.r_inner << "," << a.r_outer << ")";
                        }},
             shape_);
  return os.str();
}

bool operator==(const Domain& a, const Domain& b) {
  if (a.shape_.index() != b.shape_.index()) return false;
  return std::visit(
      Overloaded{[&](const Rectangle& r) {
                   const auto& s = std::get<Rectangle>(b.shape_);
                   return r.width == s.width && r.height == s.height;
                 },
                 [&](const Disk& d) {
                   return d.radius == std::get<Disk>(b.shape_).radius;
                 },
                 [&](const Annulus& x) {
                   const auto& y = std::get<Annulus>(b.shape_);
                   return x.r_inner == y.r_inner && x.r_outer == y.r_outer;
                 }},
      a.shape_);
}

bool Grid::touches_boundary(int k) const {
  const auto& n = neighbors_[k];
  return n[0] < 0 || n[1] < 0 || n[2] < 0 || n[3] < 0;
}

Grid build_grid(const Domain& domain, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw BadSpacing("grid spacing must be positive and finite");
  if (!(h < domain.feature_size()))
    throw BadSpacing("grid spacing " + std::to_string(h) +
                     " is not below the domain feature size " +
                     std::to_string(domain.feature_size()));

  Grid g;
  g.domain_ = domain;
  g.h_ = h;
  if (const auto* r = std::get_if<Rectangle>(&domain.shape())) {
    g.origin_ = Point::Zero();
    g.nx_ = static_cast<int>(std::ceil(r->width / h)) + 1;
    g.ny_ = static_cast<int>(std::ceil(r->height / h)) + 1;
  } else {
    const double radius = std::holds_alternative<Disk>(domain.shape())
                              ? std::get<Disk>(domain.shape()).radius
                              : std::get<Annulus>(domain.shape()).r_outer;
    const int half = static_cast<int>(std::ceil(radius / h));
    g.origin_ = Point(-half * h, -half * h);
    g.nx_ = g.ny_ = 2 * half + 1;
  }

  g.lookup_.assign(static_cast<std::size_t>(g.nx_) * g.ny_, -1);
  for (int j = 0; j < g.ny_; ++j) {
    for (int i = 0; i < g.nx_; ++i) {
      const Point x = g.origin_ + h * Point(i, j);
      if (domain.contains(x)) {
        g.lookup_[static_cast<std::size_t>(j) * g.nx_ + i] =
            static_cast<int>(g.nodes_.size());
        g.nodes_.push_back({i, j});
      }
    }
  }
  if (g.nodes_.empty()) throw EmptyGrid("no lattice point lies inside " + domain.name());

  constexpr int kDi[4] = {1, -1, 0, 0};
  constexpr int kDj[4] = {0, 0, 1, -1};
  g.neighbors_.resize(g.nodes_.size());
  g.thetas_.resize(g.nodes_.size());
  for (std::size_t k = 0; k < g.nodes_.size(); ++k) {
    const auto [i, j] = g.nodes_[k];
    const Point x = g.point(static_cast<int>(k));
    for (int d = 0; d < 4; ++d) {
      const int axis = d < 2 ? 0 : 1;
      const int sign = (d == kEast || d == kNorth) ? 1 : -1;
      const int nb = g.index(i + kDi[d], j + kDj[d]);
      const double exit = domain.ray_exit(x, axis, sign);
      if (nb >= 0 && exit >= h) {
        g.neighbors_[k][d] = nb;
        g.thetas_[k][d] = 1.0;
      } else {
        g.neighbors_[k][d] = -1;
        g.thetas_[k][d] = std::clamp(exit / h, std::numeric_limits<double>::min(), 1.0);
      }
    }
  }
  return g;
}

GridPtr make_grid(const Domain& domain, double h) {
  return std::make_shared<const Grid>(build_grid(domain, h));
}

Field::Field(GridPtr grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw GridMismatch("field without grid");
  if (values_.size() != grid_->size())
    throw GridMismatch("field length " + std::to_string(values_.size()) +
                       " does not match grid size " + std::to_string(grid_->size()));
  if (!values_.allFinite()) throw Error("field contains non-finite values");
}

Field Field::zeros(GridPtr grid) {
  const int n = grid->size();
  return Field(std::move(grid), Eigen::VectorXd::Zero(n));
}

double Field::value_at(const Point& x) const {
  const Grid& g = *grid_;
  if (!g.domain().contains(x)) return 0.0;
  const Point xi = (x - g.origin()) / g.h();
  const int i0 = static_cast<int>(std::floor(xi.x()));
  const int j0 = static_cast<int>(std::floor(xi.y()));
  const double fx = xi.x() - i0;
  const double fy = xi.y() - j0;
  auto at = [&](int i, int j) {
    const int k = g.index(i, j);
    return k >= 0 ? values_[k] : 0.0;
  };
  return (1 - fx) * (1 - fy) * at(i0, j0) + fx * (1 - fy) * at(i0 + 1, j0) +
         (1 - fx) * fy * at(i0, j0 + 1) + fx * fy * at(i0 + 1, j0 + 1);
}

Point Field::node_gradient(int k) const {
  const Grid& g = *grid_;
  const double h = g.h();
  const double f0 = values_[k];
  auto axis_derivative = [&](Direction plus, Direction minus) {
    const double b = g.theta(k, plus) * h;
    const double a = g.theta(k, minus) * h;
    const int np = g.neighbor(k, plus);
    const int nm = g.neighbor(k, minus);
    const double fp = np >= 0 ? values_[np] : 0.0;
    const double fm = nm >= 0 ? values_[nm] : 0.0;
    return -b / (a * (a + b)) * fm + (b - a) / (a * b) * f0 + a / (b * (a + b)) * fp;
  };
  return Point(axis_derivative(kEast, kWest), axis_derivative(kNorth, kSouth));
}

Point Field::gradient_at(const Point& x) const {
  const double h = grid_->h();
  const Point ex(h, 0.0);
  const Point ey(0.0, h);
  return Point((value_at(x + ex) - value_at(x - ex)) / (2 * h),
               (value_at(x + ey) - value_at(x - ey)) / (2 * h));
}

Field operator+(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("adding fields on different grids");
  return Field(a.grid_ptr(), a.values() + b.values());
}

Field operator*(double s, const Field& a) { return Field(a.grid_ptr(), s * a.values()); }

double integrate(const Grid& grid, const Field& f) {
  if (!(grid == f.grid())) throw GridMismatch("field does not live on this grid");
  double sum = 0.0;
  for (int k = 0; k < grid.size(); ++k) sum += grid.quad_weight(k) * f[k];
  return sum;
}

double grad_norm_sq_integral(const Grid& grid, const Field& f) {
  if (!(grid == f.grid())) throw GridMismatch("field does not live on this grid");
  // Each segment contributes (diff / len)^2 * len * h = diff^2 * h / len.
  double sum = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    for (int d = 0; d < 4; ++d) {
      const int nb = grid.neighbor(k, static_cast<Direction>(d));
      if (nb >= 0) {
        // interior segments are visited from both ends
        if (nb > k) {
          const double diff = f[nb] - f[k];
          sum += diff * diff;
        }
      } else {
        const double theta = grid.theta(k, static_cast<Direction>(d));
        sum += f[k] * f[k] / theta;
      }
    }
  }
  return sum;
}

}  // namespace lane_emden
