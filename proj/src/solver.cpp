#include "lane_emden/solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>

#include "lane_emden/bubble.hpp"
#include "lane_emden/nonlinearity.hpp"

namespace lane_emden {

double bubble_scale(double p, double height) {
  return std::exp(-0.5 * (std::log(p) + (p - 1.0) * std::log(height)));
}

double galerkin_amplitude(const Eigenpair& eig, double p) {
  if (!(p > 1.0)) throw Error("p must exceed 1");
  const Eigen::VectorXd& phi = eig.phi1.values();
  const double num = phi.squaredNorm();
  const double den = phi.array().pow(p + 1.0).sum();
  return std::pow(eig.lambda1 * num / den, 1.0 / (p - 1.0));
}

Field initial_guess(const Grid& grid, const Eigenpair& eig, double p) {
  if (!(eig.phi1.grid() == grid)) throw GridMismatch("eigenpair lives on another grid");
  return galerkin_amplitude(eig, p) * eig.phi1;
}

Field multi_peak_guess(GridPtr grid, std::span<const Point> centers, double p) {
  if (!(p > 1.0)) throw Error("p must exceed 1");
  const double m = std::sqrt(std::numbers::e);
  const double eps = bubble_scale(p, m);
  std::vector<Point> zs(centers.begin(), centers.end());
  return Field::sample(grid, [&](const Point& x) {
    double sum = 0.0;
    for (const Point& z : zs)
      sum += m * std::max(0.0, 1.0 + Bubble::value((x - z) / eps) / p);
    return sum;
  });
}

namespace {

double relative_residual(const LaplaceOperator& A, const Eigen::VectorXd& u, double p,
                         Eigen::VectorXd* r_out = nullptr) {
  const Eigen::VectorXd f = signed_power(u, p);
  Eigen::VectorXd r = A.apply(u) - f;
  const double fn = f.norm();
  const double rel = fn > 0.0 ? r.norm() / fn : INFINITY;
  if (r_out) *r_out = std::move(r);
  return rel;
}

}  // namespace

Solution newton_solve(const LaplaceOperator& A, double p, const Field& guess,
                      const NewtonOptions& opts) {
  if (!(p > 1.0)) throw Error("p must exceed 1");
  if (!(guess.grid() == A.grid())) throw GridMismatch("guess lives on another grid");
  if (!(guess.min() > 0.0)) throw LostPositivity("Newton guess must be positive");

  const double h = A.grid().h();
  Eigen::VectorXd u = guess.values();
  Eigen::VectorXd r;
  double rel = relative_residual(A, u, p, &r);
  double rnorm = r.norm();

  using ColMajor = Eigen::SparseMatrix<double>;
  ColMajor jac = A.matrix();
  Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(jac);

  for (int it = 0;; ++it) {
    if (rel <= opts.tol) {
      const Field field(A.grid_ptr(), u);
      const bool positive = field.min() > 0.0;
      if (!positive) throw LostPositivity("converged iterate is not positive");
      const double mu = bubble_scale(p, field.max());
      return Solution{p, field, rel, it, positive, h > 0.25 * mu};
    }
    if (it == opts.max_iters) throw NoConvergence("Newton iteration", it, rel);

    jac = A.matrix();
    const Eigen::VectorXd d = signed_power_derivative(u, p);
    for (int k = 0; k < jac.outerSize(); ++k) jac.coeffRef(k, k) -= d[k];
    lu.factorize(jac);
    if (lu.info() != Eigen::Success)
      throw SingularJacobian("Jacobian factorization failed at p = " + std::to_string(p));
    const Eigen::VectorXd delta = lu.solve(-r);
    if (!delta.allFinite())
      throw SingularJacobian("Jacobian solve produced non-finite step at p = " +
                             std::to_string(p));

    double step = 1.0;
    bool accepted = false;
    bool positivity_blocked = false;
    for (int k = 0; k <= opts.max_halvings; ++k, step *= 0.5) {
      Eigen::VectorXd trial = u + step * delta;
      const double sup = trial.cwiseAbs().maxCoeff();
      if (trial.minCoeff() < -opts.positivity_floor * sup) {
        positivity_blocked = true;
        continue;
      }
      Eigen::VectorXd rt;
      const double rel_t = relative_residual(A, trial, p, &rt);
      const double rn = rt.norm();
      if (std::isfinite(rn) && rn < rnorm) {
        u = std::move(trial);
        r = std::move(rt);
        rnorm = rn;
        rel = rel_t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (positivity_blocked)
        throw LostPositivity("damping could not keep the iterate positive at p = " +
                             std::to_string(p));
      throw NoConvergence("Newton line search stalled", it, rel);
    }
  }
}

std::vector<double> geometric_schedule(double start, double ratio, double max) {
  if (!(start > 1.0)) throw Error("p must exceed 1");
  if (!(ratio > 1.0)) throw Error("schedule ratio must exceed 1");
  std::vector<double> out;
  for (double p = start; p < max * (1.0 - 1e-12); p *= ratio) out.push_back(p);
  out.push_back(max);
  return out;
}

void validate_schedule(std::span<const double> schedule, double min_first) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 1.0)) throw Error("p must exceed 1");
    if (i > 0 && !(schedule[i] > schedule[i - 1]))
      throw Error("p schedule must be strictly increasing");
  }
  if (!schedule.empty() && schedule.front() < min_first)
    throw Error("first schedule entry must be at least " + std::to_string(min_first));
}

Branch continue_branch(const Grid& grid, const LaplaceOperator& A, const Eigenpair& eig,
                       std::span<const double> schedule, const ContinuationOptions& opts) {
  validate_schedule(schedule, 2.0);
  Branch branch;
  branch.domain = grid.domain();
  branch.h = grid.h();
  branch.schedule.assign(schedule.begin(), schedule.end());
  branch.tol = opts.newton.tol;
  if (schedule.empty()) return branch;

  auto solve = [&](double p, const Solution& seed) {
    return newton_solve(A, p, seed.u, opts.newton);
  };
  auto emit = [&](Solution s) {
    if (opts.on_solution) opts.on_solution(s);
    branch.solutions.push_back(std::move(s));
  };

  try {
    const Field seed = opts.first_guess ? *opts.first_guess
                                        : initial_guess(grid, eig, schedule.front());
    emit(newton_solve(A, schedule.front(), seed, opts.newton));
  } catch (const Error& e) {
    throw BranchBroken(schedule.front(), std::move(branch), e.what());
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    try {
      const Solution& prev = branch.solutions.back();
      emit(continue_to(prev, prev.p, schedule[i], solve, opts.max_bisections));
    } catch (const Error& e) {
      throw BranchBroken(schedule[i], std::move(branch), e.what());
    }
  }
  return branch;
}

}  // namespace lane_emden
