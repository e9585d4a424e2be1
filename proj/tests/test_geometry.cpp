#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lane_emden/elliptic.hpp"

using namespace lane_emden;
using std::numbers::pi;

TEST_CASE("unit square at h = 1/2 has the single node (0.5, 0.5)") {
  const Grid g = build_grid(Domain::unit_square(), 0.5);
  REQUIRE(g.size() == 1);
  CHECK(g.point(0).x() == 0.5);
  CHECK(g.point(0).y() == 0.5);
}

TEST_CASE("1x2 rectangle at h = 1/4 has 3 x 7 interior nodes") {
  CHECK(build_grid(Domain::rectangle(1.0, 2.0), 0.25).size() == 21);
}

TEST_CASE("disk node count matches direct lattice enumeration") {
  for (double h : {0.5, 0.25, 0.1}) {
    int count = 0;
    const int n = static_cast<int>(std::ceil(1.0 / h));
    for (int j = -n; j <= n; ++j)
      for (int i = -n; i <= n; ++i)
        if ((i * h) * (i * h) + (j * h) * (j * h) < 1.0) ++count;
    CHECK(build_grid(Domain::disk(1.0), h).size() == count);
  }
  // (+-0.5, +-0.5) lie inside the unit disk as well as the five axis points
  CHECK(build_grid(Domain::disk(1.0), 0.5).size() == 9);
}

TEST_CASE("annulus excludes the hole") {
  const Grid g = build_grid(Domain::annulus(0.43, 1.0), 0.05);
  int probe = -1;
  for (int k = 0; k < g.size(); ++k) {
    const double r = g.point(k).norm();
    CHECK(r > 0.43);
    CHECK(r < 1.0);
    if ((g.point(k) - Point(0.45, 0.0)).norm() < 1e-9) probe = k;
  }
  // the segment from (0.45, 0) to (0.40, 0) crosses the inner circle at 0.43
  REQUIRE(probe >= 0);
  CHECK(g.neighbor(probe, kWest) == -1);
  CHECK(g.theta(probe, kWest) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(g.neighbor(probe, kEast) >= 0);
}

TEST_CASE("boundary fractions lie in (0, 1] and equal 1 exactly for interior neighbors") {
  for (const Domain& d : {Domain::unit_square(), Domain::disk(1.0), Domain::annulus(0.3, 1.0)}) {
    const Grid g = build_grid(d, 1.0 / 32);
    for (int k = 0; k < g.size(); ++k) {
      CHECK(d.contains(g.point(k)));
      for (Direction dir : {kEast, kWest, kNorth, kSouth}) {
        const double t = g.theta(k, dir);
        CHECK(t > 0.0);
        CHECK(t <= 1.0);
        if (g.neighbor(k, dir) >= 0) CHECK(t == 1.0);
      }
    }
  }
}

TEST_CASE("build_grid rejects bad spacing") {
  CHECK_THROWS_AS(build_grid(Domain::unit_square(), 0.0), BadSpacing);
  CHECK_THROWS_AS(build_grid(Domain::unit_square(), -0.1), BadSpacing);
  CHECK_THROWS_AS(build_grid(Domain::annulus(0.5, 1.0), 0.6), BadSpacing);
  CHECK_THROWS_AS(build_grid(Domain::disk(1.0), 1.5), BadSpacing);
}

TEST_CASE("domains reject non-positive or inverted lengths") {
  CHECK_THROWS_AS(Domain::disk(0.0), BadDomain);
  CHECK_THROWS_AS(Domain::rectangle(1.0, -1.0), BadDomain);
  CHECK_THROWS_AS(Domain::annulus(1.0, 0.5), BadDomain);
}

TEST_CASE("quadrature weights sum to the area") {
  const Grid sq = build_grid(Domain::rectangle(1.0, 2.0), 1.0 / 16);
  double s = 0.0;
  for (int k = 0; k < sq.size(); ++k) s += sq.quad_weight(k);
  // interior nodes of a rectangle carry (W/h - 1)(H/h - 1) h^2; the missing
  // boundary strip is O(h)
  CHECK(s == doctest::Approx(15.0 * 31.0 / 256.0).epsilon(1e-14));

  double prev = 1.0;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const Grid g = build_grid(Domain::disk(1.0), h);
    double a = 0.0;
    for (int k = 0; k < g.size(); ++k) a += g.quad_weight(k);
    const double err = std::abs(a - pi) / pi;
    CHECK(err < 4.0 * h);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("integrate") {
  SUBCASE("zero field") {
    const auto g = make_grid(Domain::unit_square(), 1.0 / 16);
    CHECK(integrate(Field::zeros(g)) == 0.0);
  }
  SUBCASE("sin(pi x) sin(pi y) on the unit square") {
    const auto g = make_grid(Domain::unit_square(), 1.0 / 128);
    const Field f = Field::sample(g, [](const Point& x) {
      return std::sin(pi * x.x()) * std::sin(pi * x.y());
    });
    CHECK(std::abs(integrate(f) - 4.0 / (pi * pi)) < 1e-3);
  }
  SUBCASE("1 - |x|^2 on the unit disk") {
    const auto g = make_grid(Domain::disk(1.0), 1.0 / 128);
    const Field f = Field::sample(g, [](const Point& x) { return 1.0 - x.squaredNorm(); });
    CHECK(std::abs(integrate(f) - pi / 2.0) < 1e-2);
  }
  SUBCASE("mismatched grid") {
    const auto a = make_grid(Domain::unit_square(), 1.0 / 8);
    const auto b = make_grid(Domain::unit_square(), 1.0 / 16);
    CHECK_THROWS_AS(integrate(*a, Field::zeros(b)), GridMismatch);
  }
  SUBCASE("linearity") {
    const auto g = make_grid(Domain::disk(1.0), 1.0 / 32);
    const Field f = Field::sample(g, [](const Point& x) { return std::exp(x.x()); });
    const Field q = Field::sample(g, [](const Point& x) { return x.y() * x.y(); });
    const double lhs = integrate(2.5 * f + (-1.5) * q);
    CHECK(lhs == doctest::Approx(2.5 * integrate(f) - 1.5 * integrate(q)).epsilon(1e-14));
  }
}

TEST_CASE("grad_norm_sq_integral") {
  const auto g = make_grid(Domain::unit_square(), 1.0 / 128);
  const Field f = Field::sample(g, [](const Point& x) {
    return std::sin(pi * x.x()) * std::sin(pi * x.y());
  });
  CHECK(grad_norm_sq_integral(Field::zeros(g)) == 0.0);
  CHECK(std::abs(grad_norm_sq_integral(f) - pi * pi / 2.0) < 1e-2);
  CHECK(grad_norm_sq_integral(2.0 * f) == doctest::Approx(4.0 * grad_norm_sq_integral(f)).epsilon(1e-15));
  CHECK(grad_norm_sq_integral(f) >= 0.0);
}

TEST_CASE("discrete Green identity") {
  auto gap = [](const Domain& d, double h, auto fn) {
    const auto g = make_grid(d, h);
    const Field f = Field::sample(g, fn);
    const LaplaceOperator A = assemble(g);
    const double lhs = grad_norm_sq_integral(f);
    const double rhs = integrate(Field(g, f.values().cwiseProduct(A.apply(f).values())));
    return std::abs(lhs - rhs);
  };
  auto sq = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  auto dk = [](const Point& x) { return 1.0 - x.squaredNorm(); };
  // regular stencils: summation by parts is exact
  CHECK(gap(Domain::unit_square(), 1.0 / 32, sq) < 1e-12);
  CHECK(gap(Domain::rectangle(1.0, 2.0), 1.0 / 64, sq) < 1e-12);
  const double d1 = gap(Domain::disk(1.0), 1.0 / 32, dk), d2 = gap(Domain::disk(1.0), 1.0 / 64, dk);
  CHECK(d2 < 0.75 * d1);
}

TEST_CASE("refining the lattice keeps every coarse interior point") {
  for (const Domain& d : {Domain::unit_square(), Domain::disk(1.0), Domain::annulus(0.3, 1.0)}) {
    const Grid coarse = build_grid(d, 1.0 / 16);
    const Grid fine = build_grid(d, 1.0 / 32);
    for (int k = 0; k < coarse.size(); ++k) {
      const Point rel = (coarse.point(k) - fine.origin()) / fine.h();
      const int i = static_cast<int>(std::lround(rel.x()));
      const int j = static_cast<int>(std::lround(rel.y()));
      REQUIRE(fine.index(i, j) >= 0);
      CHECK((fine.point(fine.index(i, j)) - coarse.point(k)).norm() < 1e-12);
    }
  }
}

TEST_CASE("field values and interpolation") {
  const auto g = make_grid(Domain::disk(1.0), 1.0 / 64);
  CHECK_THROWS_AS(Field(g, Eigen::VectorXd::Zero(g->size() + 1)), GridMismatch);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(g->size());
  bad[3] = std::nan("");
  CHECK_THROWS(Field(g, bad));

  // bilinear interpolation reproduces affine fields away from the boundary
  const Field f = Field::sample(g, [](const Point& x) { return 1.0 + 2.0 * x.x() - 3.0 * x.y(); });
  const Point x(0.1234, -0.2718);
  CHECK(f.value_at(x) == doctest::Approx(1.0 + 2.0 * x.x() - 3.0 * x.y()).epsilon(1e-12));
  CHECK(f.gradient_at(x).x() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.gradient_at(x).y() == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(f.value_at(Point(2.0, 0.0)) == 0.0);
}
