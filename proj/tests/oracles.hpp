#ifndef LANE_EMDEN_TESTS_ORACLES_HPP
#define LANE_EMDEN_TESTS_ORACLES_HPP

// Reference values computed independently of the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double bessel_j0(double x) {
  double term = 1.0, sum = 1.0;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (double(k) * k);
    sum += term;
  }
  return sum;
}

inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// First zero of J0, about 2.404826.
inline double j0_first_zero() { return bisect(bessel_j0, 2.0, 3.0); }

/// One-mode Galerkin amplitude on the unit disk with phi1 = J0(j r):
/// c = (j^2 int phi^2 / int phi^{p+1})^{1/(p-1)}, composite Simpson in r.
inline double disk_galerkin_amplitude(double p, int n = 4000) {
  const double j = j0_first_zero();
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = double(i) / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double phi = bessel_j0(j * r);
    num += w * phi * phi * r;
    den += w * std::pow(std::max(phi, 0.0), p + 1.0) * r;
  }
  return std::pow(j * j * num / den, 1.0 / (p - 1.0));
}

/// Regular part H(x, y) of the unit square from the image lattice,
/// |m|, |n| <= n_max cells.
inline double square_regular_part(double x1, double x2, double y1, double y2, int n_max = 50) {
  double s = 0.0;
  for (int m = -n_max; m <= n_max; ++m)
    for (int n = -n_max; n <= n_max; ++n)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (m == 0 && n == 0 && a == 0 && b == 0) continue;  // the source itself
          const double z1 = 2.0 * m + (a ? -y1 : y1);
          const double z2 = 2.0 * n + (b ? -y2 : y2);
          const double sign = (a + b) % 2 ? -1.0 : 1.0;
          s -= sign * 0.5 * std::log((x1 - z1) * (x1 - z1) + (x2 - z2) * (x2 - z2));
        }
  return s / (2.0 * std::numbers::pi);
}

/// sup u of the positive radial solution of -Delta u = u^p on the unit disk,
/// by shooting v'' + v'/r + v^p = 0, v(0) = 1 to its first zero R and
/// scaling u(r) = R^{2/(p-1)} v(R r).
inline double radial_shooting_sup(double p, double dr = 1e-4) {
  auto rhs = [p](double r, double v, double w, double& dv, double& dw) {
    dv = w;
    dw = -w / r - std::pow(std::max(v, 0.0), p);
  };
  double r = 1e-6;
  double v = 1.0 - r * r / 4.0, w = -r / 2.0;  // series start
  for (;;) {
    double k1v, k1w, k2v, k2w, k3v, k3w, k4v, k4w;
    rhs(r, v, w, k1v, k1w);
    rhs(r + 0.5 * dr, v + 0.5 * dr * k1v, w + 0.5 * dr * k1w, k2v, k2w);
    rhs(r + 0.5 * dr, v + 0.5 * dr * k2v, w + 0.5 * dr * k2w, k3v, k3w);
    rhs(r + dr, v + dr * k3v, w + dr * k3w, k4v, k4w);
    const double vn = v + dr / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    const double wn = w + dr / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    if (vn <= 0.0) {
      const double R = r + dr * v / (v - vn);
      return std::pow(R, 2.0 / (p - 1.0));
    }
    r += dr;
    v = vn;
    w = wn;
  }
}

}  // namespace oracle

#endif
