#ifndef LANE_EMDEN_ASYMPTOTICS_HPP
#define LANE_EMDEN_ASYMPTOTICS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "lane_emden/bubble.hpp"
#include "lane_emden/green.hpp"
#include "lane_emden/radial.hpp"

namespace lane_emden {

enum class BallRule {
  kNodes,    // h^2 per node strictly inside the ball
  kClipped,  // cell weights clipped at the circle
};

/// Read access to a solution, whatever its discretization.
class SolutionView {
 public:
  virtual ~SolutionView() = default;

  virtual const Domain& domain() const = 0;
  /// Interpolated value; 0 outside the domain.
  virtual double value(const Point& x) const = 0;
  virtual Point gradient(const Point& x) const = 0;
  /// Coarsest spacing of the discretization.
  virtual double spacing() const = 0;
  virtual double sup_norm() const = 0;
  virtual double dirichlet_integral() const = 0;
  /// int_Omega g(u).
  virtual double integral(const std::function<double(double)>& g) const = 0;
  /// int_{B_r(c)} g(u); the caller checks that the ball is inside.
  virtual double ball_integral(const Point& c, double r, const std::function<double(double)>& g,
                               BallRule rule) const = 0;
  /// Calls fn(x, u(x), grad u(x)) for each discretization node.
  virtual void for_each_node(
      const std::function<void(const Point&, double, const Point&)>& fn) const = 0;
};

class GridSolutionView final : public SolutionView {
 public:
  explicit GridSolutionView(const Field& u) : u_(u) {}

  const Domain& domain() const override { return u_.grid().domain(); }
  double value(const Point& x) const override { return u_.value_at(x); }
  Point gradient(const Point& x) const override { return u_.gradient_at(x); }
  double spacing() const override { return u_.grid().h(); }
  double sup_norm() const override { return u_.sup_norm(); }
  double dirichlet_integral() const override { return grad_norm_sq_integral(u_); }
  double integral(const std::function<double(double)>& g) const override;
  double ball_integral(const Point& c, double r, const std::function<double(double)>& g,
                       BallRule rule) const override;
  void for_each_node(
      const std::function<void(const Point&, double, const Point&)>& fn) const override;

  const Field& field() const { return u_; }

 private:
  const Field& u_;
};

/// A radial profile seen as a function on the disk. Ball integrals are
/// only available for balls centered at the origin.
class RadialSolutionView final : public SolutionView {
 public:
  explicit RadialSolutionView(const RadialProfile& u)
      : u_(u), domain_(Domain::disk(u.mesh().radius())) {}

  const Domain& domain() const override { return domain_; }
  double value(const Point& x) const override { return u_.value_at_radius(x.norm()); }
  Point gradient(const Point& x) const override;
  double spacing() const override;
  double sup_norm() const override { return u_.sup_norm(); }
  double dirichlet_integral() const override { return u_.dirichlet_integral(); }
  double integral(const std::function<double(double)>& g) const override {
    return u_.ball_integral(u_.mesh().radius(), g);
  }
  double ball_integral(const Point& c, double r, const std::function<double(double)>& g,
                       BallRule rule) const override;
  void for_each_node(
      const std::function<void(const Point&, double, const Point&)>& fn) const override;

  const RadialProfile& profile() const { return u_; }

 private:
  const RadialProfile& u_;
  Domain domain_;
};

// ---------------------------------------------------------------------------

struct Peak {
  Point location;
  double height;
  double eps;  // (p * height^{p-1})^{-1/2}
};

struct PeakOptions {
  double r_min = 0.0;           // <= 0: 0.1 * diam
  double threshold = 0.25;      // relative to sup norm
};

/// Strict local maxima above threshold * sup, separated by r_min, refined
/// by a quadratic fit on the 3x3 stencil. Sorted by decreasing height.
std::vector<Peak> detect_peaks(const Field& u, double p, const PeakOptions& opts = {});
/// The radial profile has its single maximum at the origin.
std::vector<Peak> detect_peaks(const RadialProfile& u, double p);

struct RescaledSample {
  Point y;
  double w;
};

/// w(y) = (p / m)(u(y_p + eps y) - u(y_p)) on a polar lattice over B_R:
/// the origin plus n_radii circles of n_angles points each.
std::vector<RescaledSample> rescale_peak(const SolutionView& u, const Peak& pk, double p,
                                         double R, int n_radii = 50, int n_angles = 16);

/// max |w - U| over the samples.
double bubble_deviation(std::span<const RescaledSample> w);

/// max relative error of -Delta w = (1 + w/p)^p at the samples, with a
/// five-point difference of the rescaled field at step `step` (in y).
double rescaled_equation_residual(const SolutionView& u, const Peak& pk, double p,
                                  std::span<const Point> ys, double step);

/// (1 + w/p)^p as exp(p log1p(w/p)), with w/p clipped at -1 + 1e-12.
double rescaled_nonlinearity(double w, double p);

/// (p / m) int_{B_r(y_p)} u^p with clipped cell weights.
double beta_local(const SolutionView& u, const Peak& pk, double p, double r);

/// F(u) = int_0^u f.
struct PohozaevData {
  std::function<double(double)> F;
};
PohozaevData lane_emden_nonlinearity(double p);

/// Relative gap between 2 int_A F(u) and the boundary side of the
/// Pohozaev identity on A = B_radius(center), pivot at the center.
double pohozaev_residual(const SolutionView& u, const PohozaevData& f, const Point& center,
                         double radius, int n_boundary = 512);

/// max_x |p u(x) - 8 pi sum m_i G(x, x_i)| over the samples.
double green_limit_deviation(const SolutionView& u, double p, const PeakSet& peaks,
                             std::span<const double> eps, const GreenEvaluator& green,
                             std::span<const Point> samples);

struct DecayCheck {
  bool holds;
  double C;
  double C_half;  // fitted over [R_lo, R_hi / 2]
};

/// Minimal C with w(y) <= (beta/2pi - eps) log(1/|y|) + C for R_lo <= |y| <= R_hi.
/// Holds when C is finite and moves by at most 20% between R_hi/2 and R_hi.
DecayCheck decay_envelope_check(std::span<const RescaledSample> w, double beta, double eps,
                                double R_lo, double R_hi);

struct CompactnessBounds {
  double p3;
  double p4;
};

/// sup p R^2 u^{p-1} and sup p R |grad u|, R(x) = distance to the nearest peak.
CompactnessBounds compactness_bounds(const SolutionView& u, double p,
                                     std::span<const Peak> peaks);

struct EnergySummary {
  double dirichlet;  // p int |grad u|^2
  double mass_p1;    // p int u^{p+1}
  double mass_p;     // p int u^p
  double sup;
};

/// Throws IdentityViolated when the scaled Dirichlet energy and the scaled
/// L^{p+1} mass differ by more than rel_tol relative.
EnergySummary energy_summary(const SolutionView& u, double p, double rel_tol = 2e-2);

struct AsymptoticsReport {
  double p = 0.0;
  EnergySummary energy{};
  std::vector<Peak> peaks;
  std::vector<double> beta_local;
  std::vector<double> bubble_deviation;
  std::vector<double> pohozaev_residual;
  double green_limit_deviation = 0.0;
  double green_limit_scale = 0.0;  // max over samples of 8 pi sum m_i G
  std::vector<Point> concentration_residuals;
  double boundary_distance_min = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
  double off_peak_max = 0.0;  // max sqrt(p) u at distance >= 0.3 diam from peaks
  bool underresolved = false;

  double mu() const { return peaks.empty() ? 0.0 : peaks.front().eps; }
};

struct QuantizationCheck {
  double lhs;
  double rhs;
  double gap;
  bool count_ok;
};

QuantizationCheck quantization_check(const AsymptoticsReport& report);

struct ReportOptions {
  PeakOptions peaks;
  double beta_radius = 0.5;   // clamped to the distance to the boundary
  double rescale_radius = 5.0;
  double pohozaev_radius = 0.5;
  double green_sample_radius = 0.5;  // circle around the primary peak
  int green_samples = 64;
  double identity_tol = 2e-2;
};

/// Every diagnostic for one solution. Throws NoPeaks.
AsymptoticsReport analyze(const SolutionView& u, std::vector<Peak> peaks, double p,
                          const GreenEvaluator& green, const ReportOptions& opts = {});
AsymptoticsReport analyze(const Solution& s, const GreenEvaluator& green,
                          const ReportOptions& opts = {});
AsymptoticsReport analyze(const RadialSolution& s, const GreenEvaluator& green,
                          const ReportOptions& opts = {});

}  // namespace lane_emden

#endif  // LANE_EMDEN_ASYMPTOTICS_HPP
