#include "lane_emden/asymptotics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lane_emden {

namespace {

constexpr double kPi = std::numbers::pi;

double positive_power(double u, double q) { return u > 0.0 ? std::pow(u, q) : 0.0; }

// Fraction of the square cell [c - h/2, c + h/2]^2 inside the disk B_r(o).
double cell_fraction(const Point& c, double h, const Point& o, double r) {
  const Point d = (c - o).cwiseAbs();
  const Point far = d + Point::Constant(0.5 * h);
  if (far.norm() <= r) return 1.0;
  const Point near = (d - Point::Constant(0.5 * h)).cwiseMax(0.0);
  if (near.norm() >= r) return 0.0;
  constexpr int kSub = 16;
  int inside = 0;
  for (int j = 0; j < kSub; ++j)
    for (int i = 0; i < kSub; ++i) {
      const Point s = c + h * Point((i + 0.5) / kSub - 0.5, (j + 0.5) / kSub - 0.5);
      if ((s - o).squaredNorm() < r * r) ++inside;
    }
  return static_cast<double>(inside) / (kSub * kSub);
}

void require_ball(const Domain& d, const Point& c, double r) {
  if (!d.contains(c) || d.boundary_distance(c) < r * (1.0 - 1e-12))
    throw BallClipped("ball of radius " + std::to_string(r) + " leaves the domain");
}

}  // namespace

// ---------------------------------------------------------------------------
// Views

double GridSolutionView::integral(const std::function<double(double)>& g) const {
  const Grid& grid = u_.grid();
  double s = 0.0;
  for (int k = 0; k < grid.size(); ++k) s += grid.quad_weight(k) * g(u_[k]);
  return s;
}

double GridSolutionView::ball_integral(const Point& c, double r,
                                       const std::function<double(double)>& g,
                                       BallRule rule) const {
  const Grid& grid = u_.grid();
  const double h = grid.h();
  double s = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    const Point x = grid.point(k);
    double w;
    if (rule == BallRule::kNodes)
      w = (x - c).squaredNorm() < r * r ? 1.0 : 0.0;
    else
      w = cell_fraction(x, h, c, r);
    if (w > 0.0) s += w * grid.quad_weight(k) * g(u_[k]);
  }
  return s;
}

void GridSolutionView::for_each_node(
    const std::function<void(const Point&, double, const Point&)>& fn) const {
  const Grid& grid = u_.grid();
  for (int k = 0; k < grid.size(); ++k) fn(grid.point(k), u_[k], u_.node_gradient(k));
}

Point RadialSolutionView::gradient(const Point& x) const {
  const double r = x.norm();
  if (!(r > 0.0)) return Point::Zero();
  return u_.derivative_at_radius(r) * x / r;
}

double RadialSolutionView::spacing() const {
  return u_.mesh().radius() * (1.0 - std::exp(-u_.mesh().dt()));
}

double RadialSolutionView::ball_integral(const Point& c, double r,
                                         const std::function<double(double)>& g,
                                         BallRule) const {
  if (c.norm() > 1e-12 * u_.mesh().radius())
    throw Error("radial ball integrals must be centered at the origin");
  return u_.ball_integral(r, g);
}

void RadialSolutionView::for_each_node(
    const std::function<void(const Point&, double, const Point&)>& fn) const {
  const RadialMesh& m = u_.mesh();
  for (int i = 0; i < m.size(); ++i) {
    const double r = m.r(i);
    fn(Point(r, 0.0), u_[i], Point(u_.node_derivative_t(i) / r, 0.0));
  }
}

// ---------------------------------------------------------------------------
// Peaks

std::vector<Peak> detect_peaks(const Field& u, double p, const PeakOptions& opts) {
  const Grid& g = u.grid();
  const double sup = u.sup_norm();
  if (!(sup > 0.0)) throw NoPeaks("field has no positive maximum");
  const double r_min = opts.r_min > 0.0 ? opts.r_min : 0.1 * g.domain().diameter();

  auto value = [&](int i, int j) {
    const int k = g.index(i, j);
    return k >= 0 ? u[k] : 0.0;
  };

  std::vector<int> candidates;
  for (int k = 0; k < g.size(); ++k) {
    const double v = u[k];
    if (v < opts.threshold * sup) continue;
    const auto [i, j] = g.lattice(k);
    bool is_max = true;
    for (int dj = -1; dj <= 1 && is_max; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (!di && !dj) continue;
        const int kn = g.index(i + di, j + dj);
        const double vn = kn >= 0 ? u[kn] : 0.0;
        // ties go to the lower index so a plateau yields one node
        if (vn > v || (vn == v && kn >= 0 && kn < k)) {
          is_max = false;
          break;
        }
      }
    if (is_max) candidates.push_back(k);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return u[a] > u[b]; });

  std::vector<Peak> peaks;
  for (int k : candidates) {
    const Point x = g.point(k);
    bool separated = true;
    for (const Peak& q : peaks)
      if ((q.location - x).norm() < r_min) separated = false;
    if (!separated) continue;

    // quadratic fit a + b s + c t + d s^2 + e s t + f t^2 on the 3x3 stencil
    const auto [i, j] = g.lattice(k);
    Eigen::Matrix<double, 9, 6> M;
    Eigen::Matrix<double, 9, 1> rhs;
    int row = 0;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di, ++row) {
        M.row(row) << 1.0, di, dj, di * di, di * dj, dj * dj;
        rhs[row] = value(i + di, j + dj);
      }
    const Eigen::Matrix<double, 6, 1> c = M.colPivHouseholderQr().solve(rhs);
    Eigen::Matrix2d H;
    H << 2 * c[3], c[4], c[4], 2 * c[5];
    Point offset = Point::Zero();
    double height = u[k];
    if (H.determinant() > 0.0 && H(0, 0) < 0.0) {
      const Point s = H.ldlt().solve(-Point(c[1], c[2]));
      if (s.cwiseAbs().maxCoeff() <= 1.0) {
        offset = s;
        height = c[0] + c[1] * s.x() + c[2] * s.y() + c[3] * s.x() * s.x() +
                 c[4] * s.x() * s.y() + c[5] * s.y() * s.y();
      }
    }
    peaks.push_back({x + g.h() * offset, height, bubble_scale(p, height)});
  }
  if (peaks.empty()) throw NoPeaks("no local maximum above threshold");
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.height > b.height; });
  return peaks;
}

std::vector<Peak> detect_peaks(const RadialProfile& u, double p) {
  const double m = u[0];
  if (!(m > 0.0)) throw NoPeaks("radial profile has no positive maximum");
  return {Peak{Point::Zero(), m, bubble_scale(p, m)}};
}

// ---------------------------------------------------------------------------
// Rescaling

std::vector<RescaledSample> rescale_peak(const SolutionView& u, const Peak& pk, double p,
                                         double R, int n_radii, int n_angles) {
  const Domain& d = u.domain();
  if (!d.contains(pk.location) || d.boundary_distance(pk.location) < R * pk.eps)
    throw BubbleClipped("rescaled ball of radius " + std::to_string(R) + " leaves the domain");
  const double u0 = u.value(pk.location);
  const double scale = p / pk.height;
  std::vector<RescaledSample> out;
  out.push_back({Point::Zero(), 0.0});
  for (int k = 1; k <= n_radii; ++k) {
    const double rho = R * k / n_radii;
    for (int l = 0; l < n_angles; ++l) {
      const double a = 2.0 * kPi * l / n_angles;
      const Point y(rho * std::cos(a), rho * std::sin(a));
      out.push_back({y, scale * (u.value(pk.location + pk.eps * y) - u0)});
    }
  }
  return out;
}

double bubble_deviation(std::span<const RescaledSample> w) {
  double dev = 0.0;
  for (const auto& s : w) dev = std::max(dev, std::abs(s.w - Bubble::value(s.y)));
  return dev;
}

double rescaled_nonlinearity(double w, double p) {
  const double t = std::max(w / p, -1.0 + 1e-12);
  return std::exp(p * std::log1p(t));
}

double rescaled_equation_residual(const SolutionView& u, const Peak& pk, double p,
                                  std::span<const Point> ys, double step) {
  const double u0 = u.value(pk.location);
  auto w = [&](const Point& y) {
    return p / pk.height * (u.value(pk.location + pk.eps * y) - u0);
  };
  double worst = 0.0;
  for (const Point& y : ys) {
    const Point ex(step, 0.0), ey(0.0, step);
    const double wc = w(y);
    const double lap = (w(y + ex) + w(y - ex) + w(y + ey) + w(y - ey) - 4.0 * wc) / (step * step);
    const double rhs = rescaled_nonlinearity(wc, p);
    worst = std::max(worst, std::abs(-lap - rhs) / rhs);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Integral diagnostics

double beta_local(const SolutionView& u, const Peak& pk, double p, double r) {
  require_ball(u.domain(), pk.location, r);
  const double mass = u.ball_integral(
      pk.location, r, [p](double v) { return positive_power(v, p); }, BallRule::kClipped);
  return p / pk.height * mass;
}

PohozaevData lane_emden_nonlinearity(double p) {
  return {[p](double v) { return positive_power(v, p + 1.0) / (p + 1.0); }};
}

double pohozaev_residual(const SolutionView& u, const PohozaevData& f, const Point& center,
                         double radius, int n_boundary) {
  require_ball(u.domain(), center, radius);
  const double lhs = 2.0 * u.ball_integral(center, radius, f.F, BallRule::kNodes);
  double rhs = 0.0;
  for (int l = 0; l < n_boundary; ++l) {
    const double a = 2.0 * kPi * l / n_boundary;
    const Point nu(std::cos(a), std::sin(a));
    const Point x = center + radius * nu;
    const Point g = u.gradient(x);
    const Point xy = x - center;
    const double x_nu = xy.dot(nu);
    rhs += f.F(u.value(x)) * x_nu + xy.dot(g) * nu.dot(g) - 0.5 * g.squaredNorm() * x_nu;
  }
  rhs *= 2.0 * kPi * radius / n_boundary;
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-30);
}

double green_limit_deviation(const SolutionView& u, double p, const PeakSet& peaks,
                             std::span<const double> eps, const GreenEvaluator& green,
                             std::span<const Point> samples) {
  if (eps.size() != peaks.size()) throw Error("one scale per peak required");
  double dev = 0.0;
  for (const Point& x : samples) {
    double limit = 0.0;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      const double keep_out = 4.0 * std::max(eps[i], u.spacing());
      if ((x - peaks.points[i]).norm() < keep_out)
        throw SamplesTooClose("sample within " + std::to_string(keep_out) + " of a peak");
      limit += peaks.gamma(i) * green.G(x, peaks.points[i]);
    }
    dev = std::max(dev, std::abs(p * u.value(x) - limit));
  }
  return dev;
}

DecayCheck decay_envelope_check(std::span<const RescaledSample> w, double beta, double eps,
                                double R_lo, double R_hi) {
  if (R_lo < 2.0) throw Error("decay envelope needs R_lo >= 2");
  if (!(R_hi > 2.0 * R_lo)) throw InsufficientSamples("R_hi must exceed 2 R_lo");
  const double k = beta / (2.0 * kPi) - eps;
  double C = -std::numeric_limits<double>::infinity();
  double C_half = C;
  int n_half = 0;
  for (const auto& s : w) {
    const double r = s.y.norm();
    if (r < R_lo || r > R_hi) continue;
    const double c = s.w + k * std::log(r);
    C = std::max(C, c);
    if (r <= 0.5 * R_hi) {
      C_half = std::max(C_half, c);
      ++n_half;
    }
  }
  if (n_half < 2) throw InsufficientSamples("too few samples in the decay window");
  const double scale = std::max(std::abs(C), std::abs(C_half));
  const bool stable = scale == 0.0 || std::abs(C - C_half) <= 0.2 * scale;
  return {std::isfinite(C) && stable, C, C_half};
}

CompactnessBounds compactness_bounds(const SolutionView& u, double p,
                                     std::span<const Peak> peaks) {
  if (peaks.empty()) throw NoPeaks("compactness bounds need a peak");
  CompactnessBounds b{0.0, 0.0};
  u.for_each_node([&](const Point& x, double v, const Point& g) {
    double R = std::numeric_limits<double>::infinity();
    for (const Peak& pk : peaks) R = std::min(R, (x - pk.location).norm());
    b.p3 = std::max(b.p3, p * R * R * positive_power(v, p - 1.0));
    b.p4 = std::max(b.p4, p * R * g.norm());
  });
  return b;
}

EnergySummary energy_summary(const SolutionView& u, double p, double rel_tol) {
  EnergySummary e;
  e.dirichlet = p * u.dirichlet_integral();
  e.mass_p1 = p * u.integral([p](double v) { return positive_power(v, p + 1.0); });
  e.mass_p = p * u.integral([p](double v) { return positive_power(v, p); });
  e.sup = u.sup_norm();
  const double scale = std::max(std::abs(e.dirichlet), std::abs(e.mass_p1));
  if (scale > 0.0 && std::abs(e.dirichlet - e.mass_p1) > rel_tol * scale)
    throw IdentityViolated("p int |grad u|^2 = " + std::to_string(e.dirichlet) +
                           " but p int u^(p+1) = " + std::to_string(e.mass_p1));
  return e;
}

QuantizationCheck quantization_check(const AsymptoticsReport& report) {
  QuantizationCheck q;
  q.lhs = report.energy.dirichlet;
  q.rhs = 0.0;
  for (const Peak& pk : report.peaks) q.rhs += 8.0 * kPi * pk.height * pk.height;
  q.gap = q.rhs > 0.0 ? std::abs(q.lhs - q.rhs) / q.rhs : 0.0;
  const double bound = std::floor(q.lhs / (8.0 * kPi * std::numbers::e * 0.8));
  q.count_ok = static_cast<double>(report.peaks.size()) <= bound;
  return q;
}

// ---------------------------------------------------------------------------

AsymptoticsReport analyze(const SolutionView& u, std::vector<Peak> peaks, double p,
                          const GreenEvaluator& green, const ReportOptions& opts) {
  if (peaks.empty()) throw NoPeaks("report needs at least one peak");
  const Domain& d = u.domain();
  AsymptoticsReport r;
  r.p = p;
  r.energy = energy_summary(u, p, opts.identity_tol);
  r.peaks = std::move(peaks);

  PeakSet set;
  std::vector<double> eps;
  r.boundary_distance_min = std::numeric_limits<double>::infinity();
  for (const Peak& pk : r.peaks) {
    const double dist = d.boundary_distance(pk.location);
    r.boundary_distance_min = std::min(r.boundary_distance_min, dist);
    const double reach = dist * (1.0 - 1e-9);

    r.beta_local.push_back(beta_local(u, pk, p, std::min(opts.beta_radius, reach)));
    const double R = std::min(opts.rescale_radius, reach / pk.eps);
    r.bubble_deviation.push_back(bubble_deviation(rescale_peak(u, pk, p, R)));
    r.pohozaev_residual.push_back(pohozaev_residual(u, lane_emden_nonlinearity(p), pk.location,
                                                    std::min(opts.pohozaev_radius, 0.5 * dist)));
    set.points.push_back(pk.location);
    set.masses.push_back(pk.height);
    eps.push_back(pk.eps);
  }

  // Green-limit samples on a circle around the primary peak.
  const Peak& lead = r.peaks.front();
  const double rho = std::min(opts.green_sample_radius, 0.5 * d.boundary_distance(lead.location));
  std::vector<Point> samples;
  for (int l = 0; l < opts.green_samples; ++l) {
    const double a = 2.0 * kPi * l / opts.green_samples;
    const Point x = lead.location + rho * Point(std::cos(a), std::sin(a));
    if (!d.contains(x)) continue;
    bool clear = true;
    for (std::size_t i = 0; i < set.size(); ++i)
      if ((x - set.points[i]).norm() < 4.0 * std::max(eps[i], u.spacing())) clear = false;
    if (clear) samples.push_back(x);
  }
  r.green_limit_deviation = green_limit_deviation(u, p, set, eps, green, samples);
  for (const Point& x : samples) {
    double limit = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) limit += set.gamma(i) * green.G(x, set.points[i]);
    r.green_limit_scale = std::max(r.green_limit_scale, limit);
  }

  r.concentration_residuals = concentration_residual(green, set);
  const CompactnessBounds b = compactness_bounds(u, p, r.peaks);
  r.p3 = b.p3;
  r.p4 = b.p4;

  const double far = 0.3 * d.diameter();
  u.for_each_node([&](const Point& x, double v, const Point&) {
    for (const Peak& pk : r.peaks)
      if ((x - pk.location).norm() < far) return;
    r.off_peak_max = std::max(r.off_peak_max, std::sqrt(p) * v);
  });
  return r;
}

AsymptoticsReport analyze(const Solution& s, const GreenEvaluator& green,
                          const ReportOptions& opts) {
  const GridSolutionView view(s.u);
  AsymptoticsReport r = analyze(view, detect_peaks(s.u, s.p, opts.peaks), s.p, green, opts);
  r.underresolved = s.underresolved;
  return r;
}

AsymptoticsReport analyze(const RadialSolution& s, const GreenEvaluator& green,
                          const ReportOptions& opts) {
  const RadialSolutionView view(s.u);
  return analyze(view, detect_peaks(s.u, s.p), s.p, green, opts);
}

}  // namespace lane_emden
