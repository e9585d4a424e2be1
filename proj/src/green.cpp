#include "lane_emden/green.hpp"

#include <cmath>

namespace lane_emden {

namespace {

constexpr double kInvTwoPi = 1.0 / (2.0 * std::numbers::pi);

double disk_radius(const Domain& d) {
  const auto* disk = std::get_if<Disk>(&d.shape());
  if (!disk) throw BadDomain("analytic Green's function is only available on disks");
  return disk->radius;
}

}  // namespace

struct GreenEvaluator::NumericState {
  GridPtr grid;
  LaplaceOperator op;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  std::mutex mutex;
  std::map<std::pair<double, double>, std::shared_ptr<const Field>> cache;

  explicit NumericState(GridPtr g) : grid(g), op(assemble(std::move(g))) {
    const Eigen::SparseMatrix<double> m = op.matrix();
    lu.compute(m);
    if (lu.info() != Eigen::Success)
      throw SingularJacobian("Laplacian factorization failed");
  }

  Field solve(const Point& y) {
    const Eigen::VectorXd b =
        op.boundary_rhs([&](const Point& x) { return kInvTwoPi * std::log((x - y).norm()); });
    return Field(grid, lu.solve(b));
  }
};

GreenEvaluator GreenEvaluator::analytic(const Domain& disk) {
  GreenEvaluator g(Mode::kAnalytic, disk);
  g.radius_ = disk_radius(disk);
  return g;
}

GreenEvaluator GreenEvaluator::numeric(GridPtr grid) {
  GreenEvaluator g(Mode::kNumeric, grid->domain());
  g.numeric_ = std::make_shared<NumericState>(std::move(grid));
  return g;
}

void GreenEvaluator::require_interior(const Point& x) const {
  if (!domain_.contains(x)) throw OutsideDomain("point outside the domain");
}

const Field& GreenEvaluator::h_field(const Point& y) const {
  require_interior(y);
  NumericState& s = *numeric_;
  std::lock_guard<std::mutex> lock(s.mutex);
  const auto key = std::make_pair(y.x(), y.y());
  auto it = s.cache.find(key);
  if (it == s.cache.end())
    it = s.cache.emplace(key, std::make_shared<const Field>(s.solve(y))).first;
  return *it->second;
}

double GreenEvaluator::h_numeric(const Point& x, const Point& y) const {
  const Field& f = h_field(y);
  const Grid& g = f.grid();
  const Point xi = (x - g.origin()) / g.h();
  const int i0 = static_cast<int>(std::floor(xi.x()));
  const int j0 = static_cast<int>(std::floor(xi.y()));
  const double fx = xi.x() - i0;
  const double fy = xi.y() - j0;
  // Corners outside the domain take the boundary data of H.
  auto at = [&](int i, int j) {
    const int k = g.index(i, j);
    if (k >= 0) return f[k];
    const Point c = g.origin() + g.h() * Point(i, j);
    return kInvTwoPi * std::log((c - y).norm());
  };
  return (1 - fx) * (1 - fy) * at(i0, j0) + fx * (1 - fy) * at(i0 + 1, j0) +
         (1 - fx) * fy * at(i0, j0 + 1) + fx * fy * at(i0 + 1, j0 + 1);
}

double GreenEvaluator::H(const Point& x, const Point& y) const {
  if (mode_ == Mode::kAnalytic) {
    const Point xs = x / radius_, ys = y / radius_;
    return regular_part_disk<double>(xs, ys) + kInvTwoPi * std::log(radius_);
  }
  require_interior(x);
  return h_numeric(x, y);
}

double GreenEvaluator::G(const Point& x, const Point& y) const {
  const double d = (x - y).norm();
  if (!(d > 0.0)) throw CoincidentPoints("G(x, y) needs x != y");
  if (mode_ == Mode::kAnalytic)
    return green_disk<double>(Point(x / radius_), Point(y / radius_));
  return H(x, y) - kInvTwoPi * std::log(d);
}

Point GreenEvaluator::grad_H(const Point& x, const Point& y) const {
  if (mode_ == Mode::kAnalytic)
    return grad_regular_part_disk<double>(Point(x / radius_), Point(y / radius_)) / radius_;
  require_interior(x);
  const double h = numeric_->grid->h();
  const Point ex(h, 0.0), ey(0.0, h);
  return Point((h_numeric(x + ex, y) - h_numeric(x - ex, y)) / (2 * h),
               (h_numeric(x + ey, y) - h_numeric(x - ey, y)) / (2 * h));
}

Point GreenEvaluator::grad_G(const Point& x, const Point& y) const {
  const Point d = x - y;
  if (!(d.squaredNorm() > 0.0)) throw CoincidentPoints("grad G(x, y) needs x != y");
  if (mode_ == Mode::kAnalytic)
    return grad_green_disk<double>(Point(x / radius_), Point(y / radius_)) / radius_;
  return grad_H(x, y) - kInvTwoPi * d / d.squaredNorm();
}

std::pair<Field, Field> GreenEvaluator::fields(const Point& y) const {
  if (mode_ != Mode::kNumeric) throw Error("fields() needs a numeric evaluator");
  const Field& hf = h_field(y);
  const Grid& g = hf.grid();
  Eigen::VectorXd gv(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const double d = (g.point(k) - y).norm();
    // the source node itself carries no finite G value; use H there
    gv[k] = d > 0.0 ? hf[k] - kInvTwoPi * std::log(d) : hf[k];
  }
  return {Field(hf.grid_ptr(), gv), hf};
}

std::pair<Field, Field> green_numeric(const GridPtr& grid, const Point& y) {
  if (!grid->domain().contains(y) || grid->domain().boundary_distance(y) < 2.0 * grid->h())
    throw OutsideDomain("source point must stay 2h away from the boundary");
  return GreenEvaluator::numeric(grid).fields(y);
}

std::vector<Point> concentration_residual(const GreenEvaluator& green, const PeakSet& peaks) {
  const std::size_t k = peaks.size();
  if (peaks.masses.size() != k) throw Error("peak set needs one mass per point");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if ((peaks.points[i] - peaks.points[j]).norm() < 1e-12)
        throw CoincidentPeaks("two peaks share a location");
  std::vector<Point> out(k, Point::Zero());
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = peaks.masses[i] * green.grad_H_diag(peaks.points[i]);
    for (std::size_t l = 0; l < k; ++l)
      if (l != i) out[i] += peaks.masses[l] * green.grad_G(peaks.points[i], peaks.points[l]);
  }
  return out;
}

std::vector<RobinSample> robin_landscape(const GreenEvaluator& green, int n, double margin) {
  if (n < 2) throw Error("landscape needs at least 2 samples per axis");
  const Domain& d = green.domain();
  Point lo, hi;
  if (const auto* r = std::get_if<Rectangle>(&d.shape())) {
    lo = Point::Zero();
    hi = Point(r->width, r->height);
  } else {
    const double rad = 0.5 * d.diameter();
    lo = Point(-rad, -rad);
    hi = Point(rad, rad);
  }
  std::vector<RobinSample> out;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point x = lo + Point((hi - lo).x() * (i + 0.5) / n, (hi - lo).y() * (j + 0.5) / n);
      if (!d.contains(x) || d.boundary_distance(x) < margin) continue;
      out.push_back({x, green.robin(x), green.robin_gradient(x)});
    }
  }
  return out;
}

}  // namespace lane_emden
