#include "lane_emden/elliptic.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>

namespace lane_emden {

LaplaceOperator assemble(GridPtr grid) {
  const Grid& g = *grid;
  const int n = g.size();
  const double h = g.h();

  LaplaceOperator op;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(5 * static_cast<std::size_t>(n));
  constexpr Direction kPairs[2][2] = {{kEast, kWest}, {kNorth, kSouth}};
  const Point kUnit[4] = {Point(1, 0), Point(-1, 0), Point(0, 1), Point(0, -1)};

  for (int k = 0; k < n; ++k) {
    double diag = 0.0;
    for (const auto& pair : kPairs) {
      const Direction plus = pair[0];
      const Direction minus = pair[1];
      const double b = g.theta(k, plus) * h;
      const double a = g.theta(k, minus) * h;
      // -u'' ~ -[2/(a(a+b)) u_- - 2/(ab) u_0 + 2/(b(a+b)) u_+]
      const double c_minus = 2.0 / (a * (a + b));
      const double c_plus = 2.0 / (b * (a + b));
      diag += 2.0 / (a * b);
      for (const auto& [dir, c, len] : {std::tuple{plus, c_plus, b},
                                        std::tuple{minus, c_minus, a}}) {
        const int nb = g.neighbor(k, dir);
        if (nb >= 0) {
          triplets.emplace_back(k, nb, -c);
        } else {
          op.boundary_.push_back({k, c, g.point(k) + len * kUnit[dir]});
        }
      }
      if (a != b) op.symmetric_ = false;
    }
    triplets.emplace_back(k, k, diag);
  }

  op.matrix_.resize(n, n);
  op.matrix_.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix_.makeCompressed();
  op.grid_ = std::move(grid);
  return op;
}

Field LaplaceOperator::apply(const Field& f) const {
  if (!(f.grid() == *grid_)) throw GridMismatch("operator applied to a foreign field");
  return Field(grid_, matrix_ * f.values());
}

Eigen::VectorXd LaplaceOperator::boundary_rhs(
    const std::function<double(const Point&)>& g) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size());
  for (const auto& c : boundary_) b[c.row] += c.coeff * g(c.where);
  return b;
}

namespace {

template <class Solver>
Eigen::VectorXd run_iterative(const SparseMatrix& m, const Eigen::VectorXd& rhs,
                              double inner, double tol, int cap) {
  Solver solver;
  solver.setTolerance(inner);
  solver.setMaxIterations(cap);
  solver.compute(m);
  Eigen::VectorXd x = solver.solve(rhs);
  const double rel = (m * x - rhs).norm() / rhs.norm();
  if (!(rel <= tol) || !x.allFinite())
    throw NoConvergence("linear solve did not reach tolerance",
                        static_cast<int>(solver.iterations()), rel);
  return x;
}

}  // namespace

Eigen::VectorXd solve_poisson(const LaplaceOperator& A, const Eigen::VectorXd& rhs,
                              double tol) {
  if (!(tol > 0.0)) throw Error("solve_poisson: tolerance must be positive");
  if (rhs.size() != A.size()) throw GridMismatch("rhs length does not match operator");
  if (rhs.squaredNorm() == 0.0) return Eigen::VectorXd::Zero(A.size());
  const int cap = std::max(1, static_cast<int>(50.0 * std::sqrt(double(A.size()))));
  // Eigen stops on the recursively updated residual, which drifts from the
  // true one; iterate to half the tolerance and check the true residual.
  const double inner = 0.5 * tol;
  if (A.symmetric()) {
    using CG = Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                        Eigen::DiagonalPreconditioner<double>>;
    return run_iterative<CG>(A.matrix(), rhs, inner, tol, cap);
  }
  using BiCG = Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>>;
  return run_iterative<BiCG>(A.matrix(), rhs, inner, tol, cap);
}

Field solve_poisson(const LaplaceOperator& A, const Field& rhs, double tol) {
  if (!(rhs.grid() == A.grid())) throw GridMismatch("rhs lives on a different grid");
  return Field(A.grid_ptr(), solve_poisson(A, rhs.values(), tol));
}

Eigenpair principal_eigenpair(const LaplaceOperator& A, double tol) {
  if (!(tol > 0.0)) throw Error("principal_eigenpair: tolerance must be positive");
  const Grid& g = A.grid();
  const Point c = g.domain().center();
  const double scale = g.domain().diameter();

  // Positive start so the iteration cannot lock onto a sign-changing mode.
  Eigen::VectorXd x(g.size());
  for (int k = 0; k < g.size(); ++k)
    x[k] = std::max(g.domain().boundary_distance(g.point(k)), 1e-3 * scale) +
           1e-3 * (g.point(k) - c).squaredNorm();
  x /= x.maxCoeff();

  // below 1e-10 the true Krylov residual sits at roundoff level
  const double inner_tol = std::clamp(1e-2 * tol, 1e-10, 1e-8);
  constexpr int kMaxIterations = 500;
  double lambda = 0.0;
  double residual = INFINITY;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Eigen::VectorXd y = solve_poisson(A, x, inner_tol);
    y /= y.maxCoeff();
    const Eigen::VectorXd Ay = A.apply(y);
    lambda = y.dot(Ay) / y.squaredNorm();
    residual = (Ay - lambda * y).cwiseAbs().maxCoeff();
    x = std::move(y);
    if (residual <= tol * lambda) {
      if (x.minCoeff() <= 0.0) throw Error("principal eigenvector is not positive");
      return Eigenpair{lambda, Field(A.grid_ptr(), x), residual, it};
    }
  }
  throw NoConvergence("inverse power iteration", kMaxIterations, residual / lambda);
}

}  // namespace lane_emden
