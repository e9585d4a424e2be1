#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lane_emden/asymptotics.hpp"
#include "lane_emden/solver.hpp"

using namespace lane_emden;
using std::numbers::pi;

namespace {

const double kE = std::numbers::e;

// u = m (1 + U((x - z)/eps)/p)_+ with eps tied to m through p m^{p-1} eps^2 = 1.
Field planted_bubble(const GridPtr& g, const Point& z, double p, double eps) {
  const double m = std::exp(-std::log(p * eps * eps) / (p - 1.0));
  return Field::sample(g, [&](const Point& x) {
    return m * std::max(0.0, 1.0 + Bubble::value_radial((x - z).norm() / eps) / p);
  });
}

double planted_height(double p, double eps) { return std::exp(-std::log(p * eps * eps) / (p - 1.0)); }

// 2 pi int_0^R (1 + U(rho)/p)_+^p rho d rho, composite Simpson.
double planted_mass(double p, double R, int n = 20000) {
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double rho = R * i / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::pow(std::max(0.0, 1.0 + Bubble::value_radial(rho) / p), p) * rho;
  }
  return 2.0 * pi * s * R / (3.0 * n);
}

}  // namespace

TEST_CASE("bubble closed forms") {
  CHECK(Bubble::value(Point(0, 0)) == 0.0);
  CHECK(Bubble::value_radial(std::sqrt(8.0)) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(Bubble::value_radial(std::sqrt(8.0)) == doctest::Approx(-1.38629).epsilon(1e-5));
  CHECK(Bubble::mass(std::sqrt(8.0)) == doctest::Approx(4.0 * pi).epsilon(1e-15));
  CHECK(Bubble::mass(1e8) == doctest::Approx(8.0 * pi).epsilon(1e-14));
  CHECK(Bubble::total_mass() == doctest::Approx(25.1327).epsilon(1e-5));
  for (double r : {0.5, 1.0, 3.0, 10.0}) {
    CHECK(Bubble::value_radial(r) <= 0.0);
    CHECK(Bubble::density_radial(r) == doctest::Approx(std::exp(Bubble::value_radial(r))).epsilon(1e-14));
    const double d = 1e-6;
    CHECK(Bubble::derivative_radial(r) ==
          doctest::Approx((Bubble::value_radial(r + d) - Bubble::value_radial(r - d)) / (2 * d)).epsilon(1e-7));
  }
}

TEST_CASE("detect_peaks") {
  SUBCASE("single radial bump") {
    const auto g = make_grid(Domain::disk(1.0), 1.0 / 64);
    const Field u = Field::sample(g, [](const Point& x) { return std::cos(0.5 * pi * x.norm()) + 0.01 * x.x(); });
    const auto peaks = detect_peaks(u, 3.0);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].location.norm() <= g->h());
    CHECK(peaks[0].eps == doctest::Approx(bubble_scale(3.0, peaks[0].height)));
  }
  SUBCASE("two planted bubbles at (+-0.4, 0)") {
    const auto g = make_grid(Domain::disk(1.0), 1.0 / 128);
    // the tail of each bump shifts the other's maximum by about 0.2 eps
    const double p = 10.0, eps = 0.02;
    const Field a = planted_bubble(g, Point(0.4, 0.0), p, eps);
    const Field b = planted_bubble(g, Point(-0.4, 0.0), p, eps);
    const auto peaks = detect_peaks(a + b, p);
    REQUIRE(peaks.size() == 2);
    for (const Point& z : {Point(0.4, 0.0), Point(-0.4, 0.0)}) {
      double best = 1.0;
      for (const Peak& pk : peaks) best = std::min(best, (pk.location - z).norm());
      CHECK(best <= g->h());
    }
    CHECK(peaks[0].height >= peaks[1].height);
  }
  SUBCASE("sub-lattice refinement") {
    const auto g = make_grid(Domain::unit_square(), 1.0 / 64);
    const Point z(0.5 + 0.3 / 64, 0.5 - 0.2 / 64);
    const Field u = Field::sample(g, [&](const Point& x) { return 2.0 - (x - z).squaredNorm(); });
    const auto peaks = detect_peaks(u, 3.0);
    REQUIRE(peaks.size() == 1);
    CHECK((peaks[0].location - z).norm() < 1e-9);
    CHECK(peaks[0].height == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("zero field") {
    const auto g = make_grid(Domain::disk(1.0), 1.0 / 16);
    CHECK_THROWS_AS(detect_peaks(Field::zeros(g), 3.0), NoPeaks);
  }
}

TEST_CASE("rescale_peak: planted bubble round trip") {
  const auto g = make_grid(Domain::disk(1.0), 1.0 / 256);
  const double p = 10.0, eps = 0.1;
  const Field u = planted_bubble(g, Point(0, 0), p, eps);
  const GridSolutionView view(u);
  const Peak pk{Point(0, 0), planted_height(p, eps), eps};
  CHECK(u.max() == doctest::Approx(pk.height).epsilon(1e-14));
  const auto w = rescale_peak(view, pk, p, 5.0);
  REQUIRE(w.size() == 1 + 50 * 16);
  CHECK(w.front().w == 0.0);
  for (const auto& s : w) CHECK(s.w <= 1e-12);
  CHECK(bubble_deviation(w) <= 1e-3);

  CHECK_THROWS_AS(rescale_peak(view, pk, p, 12.0), BubbleClipped);
  CHECK_THROWS_AS(rescale_peak(view, Peak{Point(0.8, 0.0), pk.height, eps}, p, 5.0), BubbleClipped);
}

TEST_CASE("rescaled nonlinearity") {
  CHECK(rescaled_nonlinearity(0.0, 50.0) == 1.0);
  CHECK(rescaled_nonlinearity(-2.0, 1e8) == doctest::Approx(std::exp(-2.0)).epsilon(1e-7));
  CHECK(rescaled_nonlinearity(-100.0, 50.0) >= 0.0);
  CHECK(std::isfinite(rescaled_nonlinearity(-1e6, 50.0)));
}

TEST_CASE("beta_local") {
  const auto g = make_grid(Domain::disk(1.0), 1.0 / 256);
  SUBCASE("planted bubble matches the radial mass") {
    const double p = 200.0, eps = 0.05, r = 0.5;
    const Field u = planted_bubble(g, Point(0, 0), p, eps);
    const GridSolutionView view(u);
    const Peak pk{Point(0, 0), planted_height(p, eps), eps};
    const double beta = beta_local(view, pk, p, r);
    const double R_eff = r / eps;
    CHECK(std::abs(beta - planted_mass(p, R_eff)) / planted_mass(p, R_eff) < 5e-3);
    CHECK(std::abs(beta - Bubble::mass(R_eff)) / Bubble::mass(R_eff) < 2e-2);
  }
  SUBCASE("zero field") {
    const Field u = Field::zeros(g);
    const GridSolutionView view(u);
    CHECK(beta_local(view, Peak{Point(0, 0), 1.0, 0.1}, 3.0, 0.5) == 0.0);
  }
  SUBCASE("ball must stay inside") {
    const Field u = Field::zeros(g);
    const GridSolutionView view(u);
    CHECK_THROWS_AS(beta_local(view, Peak{Point(0.6, 0), 1.0, 0.1}, 3.0, 0.5), BallClipped);
  }
}

TEST_CASE("pohozaev_residual: manufactured field") {
  auto residual = [](double h) {
    const auto g = make_grid(Domain::disk(1.0), h);
    const Field u = Field::sample(g, [](const Point& x) { return 0.25 * (1.0 - x.squaredNorm()); });
    const GridSolutionView view(u);
    const PohozaevData f{[](double v) { return v; }};  // f = 1, F(u) = u
    return pohozaev_residual(view, f, Point(0, 0), 0.5);
  };
  const double r128 = residual(1.0 / 128), r256 = residual(1.0 / 256);
  CHECK(r128 <= 5e-3);
  CHECK(r128 / r256 >= 2.0 * 0.7);
  CHECK(r128 / r256 <= 2.0 * 1.3);

  const auto g = make_grid(Domain::disk(1.0), 1.0 / 64);
  const Field z = Field::zeros(g);
  CHECK(pohozaev_residual(GridSolutionView(z), lane_emden_nonlinearity(5.0), Point(0, 0), 0.5) == 0.0);
  CHECK_THROWS_AS(pohozaev_residual(GridSolutionView(z), lane_emden_nonlinearity(5.0), Point(0.7, 0), 0.5),
                  BallClipped);
}

TEST_CASE("green_limit_deviation") {
  const auto g = make_grid(Domain::disk(1.0), 1.0 / 128);
  const GreenEvaluator green = GreenEvaluator::analytic(Domain::disk(1.0));
  const double p = 40.0;
  const Point z1(0.3, 0.1), z2(-0.35, -0.2);
  const double m1 = 1.6, m2 = 1.2;
  // p u = 8 pi (m1 G(., z1) + m2 G(., z2)), regularized inside the keep-out discs
  const Field u = Field::sample(g, [&](const Point& x) {
    const double d1 = std::max((x - z1).norm(), 0.05), d2 = std::max((x - z2).norm(), 0.05);
    const Point x1 = (x - z1).norm() < 0.05 ? Point(z1 + Point(d1, 0)) : x;
    const Point x2 = (x - z2).norm() < 0.05 ? Point(z2 + Point(d2, 0)) : x;
    return 8.0 * pi * (m1 * green.G(x1, z1) + m2 * green.G(x2, z2)) / p;
  });
  const GridSolutionView view(u);
  std::vector<Point> samples;
  for (int l = 0; l < 32; ++l) {
    const double a = 2.0 * pi * l / 32;
    samples.push_back(0.75 * Point(std::cos(a), std::sin(a)));
  }
  const std::vector<double> eps{1e-3, 1e-3};
  const PeakSet peaks{{z1, z2}, {m1, m2}};
  const PeakSet swapped{{z2, z1}, {m2, m1}};
  const double dev = green_limit_deviation(view, p, peaks, eps, green, samples);
  CHECK(dev <= 1e-3);
  CHECK(green_limit_deviation(view, p, swapped, eps, green, samples) == doctest::Approx(dev).epsilon(1e-12));

  const std::vector<Point> close{z1 + Point(3.0 / 128, 0.0)};
  CHECK_THROWS_AS(green_limit_deviation(view, p, peaks, eps, green, close), SamplesTooClose);
}

TEST_CASE("decay_envelope_check") {
  auto radial_samples = [](auto fn, double R_hi) {
    std::vector<RescaledSample> out;
    for (int k = 0; k <= 400; ++k) {
      const double r = R_hi * k / 400;
      out.push_back({Point(r, 0.0), fn(r)});
    }
    return out;
  };
  SUBCASE("the bubble decays like -4 log |y|") {
    const auto w = radial_samples([](double r) { return Bubble::value_radial(r); }, 100.0);
    const DecayCheck d = decay_envelope_check(w, 8.0 * pi, 0.5, 2.0, 100.0);
    CHECK(d.holds);
    CHECK(d.C <= 10.0);
    // maximum of U + 3.5 log r sits at r^2 = 56
    CHECK(d.C == doctest::Approx(-2.0 * std::log(8.0) + 1.75 * std::log(56.0)).epsilon(1e-3));
  }
  SUBCASE("slow decay is detected") {
    const auto w = radial_samples([](double r) { return -std::log(std::max(r, 1e-300)); }, 16.0);
    const DecayCheck d = decay_envelope_check(w, 8.0 * pi, 0.5, 2.0, 16.0);
    CHECK(!d.holds);
    CHECK(d.C > d.C_half);
  }
  SUBCASE("w = 0") {
    const auto w = radial_samples([](double) { return 0.0; }, 100.0);
    const DecayCheck d = decay_envelope_check(w, 8.0 * pi, 0.5, 2.0, 100.0);
    CHECK(d.holds);
    CHECK(d.C == doctest::Approx(3.5 * std::log(100.0)).epsilon(1e-12));
  }
  SUBCASE("windows") {
    const auto w = radial_samples([](double) { return 0.0; }, 10.0);
    CHECK_THROWS(decay_envelope_check(w, 8.0 * pi, 0.5, 1.0, 10.0));
    CHECK_THROWS_AS(decay_envelope_check(w, 8.0 * pi, 0.5, 2.0, 3.0), InsufficientSamples);
    const std::vector<RescaledSample> sparse{{Point(0, 0), 0.0}, {Point(9, 0), 0.0}};
    CHECK_THROWS_AS(decay_envelope_check(sparse, 8.0 * pi, 0.5, 2.0, 10.0), InsufficientSamples);
  }
}

TEST_CASE("compactness_bounds") {
  const auto g = make_grid(Domain::disk(1.0), 1.0 / 256);
  const Field z = Field::zeros(g);
  const std::vector<Peak> center{Peak{Point(0, 0), 1.0, 0.1}};
  const CompactnessBounds zero = compactness_bounds(GridSolutionView(z), 5.0, center);
  CHECK(zero.p3 == 0.0);
  CHECK(zero.p4 == 0.0);

  // sup |y|^2 e^U = 2 at |y|^2 = 8
  const double p = 200.0, eps = 0.05;
  const Field u = planted_bubble(g, Point(0, 0), p, eps);
  const CompactnessBounds b = compactness_bounds(GridSolutionView(u), p, center);
  CHECK(b.p3 <= 8.0);
  CHECK(b.p3 == doctest::Approx(2.0).epsilon(3e-2));
  CHECK(std::isfinite(b.p4));
  CHECK_THROWS_AS(compactness_bounds(GridSolutionView(u), p, std::vector<Peak>{}), NoPeaks);
}

TEST_CASE("energy_summary and quantization_check") {
  SUBCASE("identity on a converged solution") {
    const auto g = make_grid(Domain::disk(1.0), 1.0 / 64);
    const LaplaceOperator A = assemble(g);
    const Eigenpair eig = principal_eigenpair(A, 1e-8);
    const Solution s = newton_solve(A, 3.0, initial_guess(*g, eig, 3.0), 1e-10, 60);
    const EnergySummary e = energy_summary(GridSolutionView(s.u), 3.0);
    CHECK(std::abs(e.dirichlet - e.mass_p1) / e.mass_p1 < 2e-2);
    CHECK(e.sup == s.u.max());
  }
  SUBCASE("a non-solution violates it") {
    const auto g = make_grid(Domain::unit_square(), 1.0 / 32);
    const Field f = Field::sample(g, [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); });
    CHECK_THROWS_AS(energy_summary(GridSolutionView(f), 3.0), IdentityViolated);
  }
  SUBCASE("quantization arithmetic") {
    AsymptoticsReport r;
    const double m = std::sqrt(kE);
    r.energy.dirichlet = 8.0 * pi * kE;
    r.peaks = {Peak{Point(0, 0), m, 1e-6}};
    const QuantizationCheck q = quantization_check(r);
    CHECK(q.rhs == doctest::Approx(8.0 * pi * kE).epsilon(1e-15));
    CHECK(q.gap < 1e-15);
    CHECK(q.count_ok);

    r.peaks.push_back(Peak{Point(0.5, 0), m, 1e-6});
    CHECK(!quantization_check(r).count_ok);
    r.energy.dirichlet = 2.0 * 8.0 * pi * kE;
    CHECK(quantization_check(r).count_ok);
  }
}

TEST_CASE("radial view of a disk solution") {
  auto mesh = std::make_shared<const RadialMesh>(1.0, -110.0, 8000);
  RadialContinuationOptions opts;
  const std::vector<double> schedule{2, 5, 10, 20, 50};
  const RadialBranch b = continue_radial_branch(mesh, schedule, opts);
  const RadialSolution& s = b.solutions.back();
  const RadialSolutionView view(s.u);
  const double p = s.p;

  const auto peaks = detect_peaks(s.u, p);
  REQUIRE(peaks.size() == 1);
  // Pohozaev on B_0.5(0) for the computed solution
  CHECK(pohozaev_residual(view, lane_emden_nonlinearity(p), Point(0, 0), 0.5) <= 5e-2);
  CHECK(peaks[0].height >= 0.9);

  const GreenEvaluator green = GreenEvaluator::analytic(Domain::disk(1.0));
  const AsymptoticsReport rep = analyze(s, green);
  CHECK(rep.underresolved == false);
  CHECK(rep.bubble_deviation.front() < 0.15);
  CHECK(rep.concentration_residuals.front().norm() == 0.0);
  CHECK(std::abs(rep.energy.dirichlet - rep.energy.mass_p1) / rep.energy.mass_p1 < 1e-6);

  // the rescaled equation on interior samples of B_5
  std::vector<Point> ys;
  for (double r : {0.5, 1.0, 2.0, 3.0, 4.0}) ys.push_back(Point(r, 0.0));
  CHECK(rescaled_equation_residual(view, peaks[0], p, ys, 1e-3) <= 0.1);
}
