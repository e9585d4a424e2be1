#include "lane_emden/radial.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>

#include "lane_emden/nonlinearity.hpp"

namespace lane_emden {

RadialMesh::RadialMesh(double radius, double t_min, int n)
    : radius_(radius), t_min_(t_min), n_(n) {
  if (!(radius > 0.0)) throw BadDomain("disk radius must be positive");
  if (!(t_min < std::log(radius))) throw BadSpacing("t_min must lie below log(radius)");
  if (n < 4) throw BadSpacing("radial mesh needs at least 4 nodes");
  dt_ = (std::log(radius) - t_min) / n;
}

RadialProfile::RadialProfile(RadialMeshPtr mesh, Eigen::VectorXd values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw GridMismatch("profile without mesh");
  if (values_.size() != mesh_->size())
    throw GridMismatch("profile length does not match radial mesh");
  if (!values_.allFinite()) throw Error("profile contains non-finite values");
}

double RadialProfile::node_slope(int i) const {
  const double dt = mesh_->dt();
  const int n = size();
  if (i <= 0) return 0.0;
  if (i >= n) return (3.0 * at(n) - 4.0 * at(n - 1) + at(n - 2)) / (2.0 * dt);
  return (at(i + 1) - at(i - 1)) / (2.0 * dt);
}

double RadialProfile::node_derivative_t(int i) const { return node_slope(i); }

double RadialProfile::value_at_t(double t) const {
  const RadialMesh& m = *mesh_;
  if (t <= m.t_min()) return values_[0];
  if (t >= m.t_max()) return 0.0;
  const double xi = (t - m.t_min()) / m.dt();
  const int i = std::min(static_cast<int>(std::floor(xi)), size() - 1);
  const double s = xi - i;
  const double dt = m.dt();
  const double y0 = at(i), y1 = at(i + 1);
  const double d0 = node_slope(i) * dt, d1 = node_slope(i + 1) * dt;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * d1;
}

double RadialProfile::slope_at_t(double t) const {
  const RadialMesh& m = *mesh_;
  if (t <= m.t_min()) return 0.0;
  if (t >= m.t_max()) return node_slope(size());
  const double xi = (t - m.t_min()) / m.dt();
  const int i = std::min(static_cast<int>(std::floor(xi)), size() - 1);
  const double s = xi - i;
  const double dt = m.dt();
  const double y0 = at(i), y1 = at(i + 1);
  const double d0 = node_slope(i) * dt, d1 = node_slope(i + 1) * dt;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * d0 + (-6 * s2 + 6 * s) * y1 +
          (3 * s2 - 2 * s) * d1) /
         dt;
}

double RadialProfile::value_at_radius(double r) const {
  if (r >= mesh_->radius()) return 0.0;
  if (r <= 0.0) return values_[0];
  return value_at_t(std::log(r));
}

double RadialProfile::derivative_at_radius(double r) const {
  if (r <= 0.0 || std::log(r) <= mesh_->t_min()) return 0.0;
  return slope_at_t(std::log(std::min(r, mesh_->radius()))) / r;
}

double RadialProfile::ball_integral(double rho, const std::function<double(double)>& g) const {
  const RadialMesh& m = *mesh_;
  if (!(rho > 0.0)) return 0.0;
  const double t_end = std::min(std::log(rho), m.t_max());
  const double r0 = m.r(0);
  double sum = 0.5 * r0 * r0 * g(values_[0]);  // core disk below t_min
  if (t_end <= m.t_min()) return 2.0 * std::numbers::pi * 0.5 * rho * rho * g(values_[0]);
  auto integrand = [&](int i) { return std::exp(2.0 * m.t(i)) * g(at(i)); };
  const double xi = (t_end - m.t_min()) / m.dt();
  const int full = std::min(static_cast<int>(std::floor(xi)), size());
  double prev = integrand(0);
  for (int i = 1; i <= full; ++i) {
    const double cur = integrand(i);
    sum += 0.5 * m.dt() * (prev + cur);
    prev = cur;
  }
  const double tail = t_end - m.t(full);
  if (tail > 0.0) {
    const double cur = std::exp(2.0 * t_end) * g(value_at_t(t_end));
    sum += 0.5 * tail * (prev + cur);
  }
  return 2.0 * std::numbers::pi * sum;
}

double RadialProfile::dirichlet_integral() const {
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) {
    const double d = at(i + 1) - at(i);
    sum += d * d;
  }
  return 2.0 * std::numbers::pi * sum / mesh_->dt();
}

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

// -d^2/dt^2 with reflection at t_min and u = 0 at t_max.
ColMatrix second_difference(const RadialMesh& m) {
  const int n = m.size();
  const double c = 1.0 / (m.dt() * m.dt());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 2.0 * c);
    if (i == 0) {
      trip.emplace_back(0, 1, -2.0 * c);
    } else {
      trip.emplace_back(i, i - 1, -c);
      if (i + 1 < n) trip.emplace_back(i, i + 1, -c);
    }
  }
  ColMatrix t(n, n);
  t.setFromTriplets(trip.begin(), trip.end());
  t.makeCompressed();
  return t;
}

Eigen::VectorXd area_weights(const RadialMesh& m) {
  Eigen::VectorXd w(m.size());
  for (int i = 0; i < m.size(); ++i) w[i] = std::exp(2.0 * m.t(i));
  return w;
}

Eigen::VectorXd trapezoid(const RadialMesh& m) {
  Eigen::VectorXd w(m.size());
  for (int i = 0; i < m.size(); ++i) w[i] = m.weight(i);
  return w;
}

}  // namespace

RadialEigenpair radial_principal_eigenpair(RadialMeshPtr mesh, double tol) {
  const RadialMesh& m = *mesh;
  const ColMatrix T = second_difference(m);
  const Eigen::VectorXd w = area_weights(m);
  const Eigen::VectorXd omega = trapezoid(m);
  Eigen::SparseLU<ColMatrix> lu(T);
  if (lu.info() != Eigen::Success) throw SingularJacobian("radial Laplacian is singular");

  Eigen::VectorXd x(m.size());
  for (int i = 0; i < m.size(); ++i) x[i] = 1.0 - m.r(i) / m.radius();
  double lambda = 0.0;
  constexpr int kMaxIterations = 500;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Eigen::VectorXd y = lu.solve(w.cwiseProduct(x));
    y /= y.maxCoeff();
    const Eigen::VectorXd Ty = T * y;
    lambda = y.dot(omega.cwiseProduct(Ty)) / y.dot(omega.cwiseProduct(w.cwiseProduct(y)));
    const Eigen::VectorXd Wy = lambda * w.cwiseProduct(y);
    const double res = (Ty - Wy).norm() / Wy.norm();
    x = std::move(y);
    if (res <= tol) return RadialEigenpair{lambda, RadialProfile(mesh, x)};
  }
  throw NoConvergence("radial inverse power iteration", kMaxIterations, lambda);
}

double galerkin_amplitude(const RadialEigenpair& eig, double p) {
  if (!(p > 1.0)) throw Error("p must exceed 1");
  const auto& phi = eig.phi1;
  const double num = phi.ball_integral(phi.mesh().radius(), [](double v) { return v * v; });
  const double den = phi.ball_integral(phi.mesh().radius(),
                                       [p](double v) { return std::pow(v, p + 1.0); });
  return std::pow(eig.lambda1 * num / den, 1.0 / (p - 1.0));
}

namespace {

struct RadialResidual {
  Eigen::VectorXd r;
  double norm;
  double rel;
};

RadialResidual radial_residual(const ColMatrix& T, const Eigen::VectorXd& w,
                               const Eigen::VectorXd& u, double p) {
  const Eigen::VectorXd f = w.cwiseProduct(signed_power(u, p));
  RadialResidual out;
  out.r = T * u - f;
  out.norm = out.r.norm();
  const double fn = f.norm();
  out.rel = fn > 0.0 ? out.norm / fn : INFINITY;
  return out;
}

}  // namespace

RadialSolution radial_newton_solve(double p, const RadialProfile& guess,
                                   const NewtonOptions& opts) {
  if (!(p > 1.0)) throw Error("p must exceed 1");
  if (!(guess.values().minCoeff() > 0.0))
    throw LostPositivity("Newton guess must be positive");
  const RadialMesh& m = guess.mesh();
  const ColMatrix T = second_difference(m);
  const Eigen::VectorXd w = area_weights(m);

  Eigen::VectorXd u = guess.values();
  RadialResidual res = radial_residual(T, w, u, p);
  Eigen::SparseLU<ColMatrix> lu;
  lu.analyzePattern(T);
  ColMatrix jac = T;

  for (int it = 0;; ++it) {
    if (res.rel <= opts.tol) {
      if (!(u.minCoeff() > 0.0)) throw LostPositivity("converged iterate is not positive");
      return RadialSolution{p, RadialProfile(guess.mesh_ptr(), u), res.rel, it, true};
    }
    if (it == opts.max_iters) throw NoConvergence("radial Newton iteration", it, res.rel);

    jac = T;
    const Eigen::VectorXd d = w.cwiseProduct(signed_power_derivative(u, p));
    for (int k = 0; k < jac.outerSize(); ++k) jac.coeffRef(k, k) -= d[k];
    lu.factorize(jac);
    if (lu.info() != Eigen::Success)
      throw SingularJacobian("radial Jacobian factorization failed at p = " +
                             std::to_string(p));
    const Eigen::VectorXd delta = lu.solve(-res.r);
    if (!delta.allFinite()) throw SingularJacobian("radial Newton step is not finite");

    double step = 1.0;
    bool accepted = false;
    bool positivity_blocked = false;
    for (int k = 0; k <= opts.max_halvings; ++k, step *= 0.5) {
      Eigen::VectorXd trial = u + step * delta;
      if (trial.minCoeff() < -opts.positivity_floor * trial.cwiseAbs().maxCoeff()) {
        positivity_blocked = true;
        continue;
      }
      RadialResidual rt = radial_residual(T, w, trial, p);
      if (std::isfinite(rt.norm) && rt.norm < res.norm) {
        u = std::move(trial);
        res = std::move(rt);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (positivity_blocked)
        throw LostPositivity("damping could not keep the radial iterate positive");
      throw NoConvergence("radial Newton line search stalled", it, res.rel);
    }
  }
}

RadialBranch continue_radial_branch(RadialMeshPtr mesh, std::span<const double> schedule,
                                    const RadialContinuationOptions& opts) {
  validate_schedule(schedule, 2.0);
  RadialBranch branch;
  branch.radius = mesh->radius();
  branch.t_min = mesh->t_min();
  branch.nodes = mesh->size();
  branch.schedule.assign(schedule.begin(), schedule.end());
  branch.tol = opts.newton.tol;
  if (schedule.empty()) return branch;

  auto emit = [&](RadialSolution s) {
    if (opts.on_solution) opts.on_solution(s);
    branch.solutions.push_back(std::move(s));
  };
  auto solve = [&](double p, const RadialSolution& seed) {
    return radial_newton_solve(p, seed.u, opts.newton);
  };

  try {
    if (opts.first_guess) {
      emit(radial_newton_solve(schedule.front(), *opts.first_guess, opts.newton));
    } else {
      const RadialEigenpair eig = radial_principal_eigenpair(mesh, 1e-10);
      const double c = galerkin_amplitude(eig, schedule.front());
      emit(radial_newton_solve(schedule.front(),
                               RadialProfile(mesh, c * eig.phi1.values()), opts.newton));
    }
  } catch (const Error& e) {
    throw RadialBranchBroken(schedule.front(), std::move(branch), e.what());
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    try {
      const RadialSolution& prev = branch.solutions.back();
      emit(continue_to(prev, prev.p, schedule[i], solve, opts.max_bisections));
    } catch (const Error& e) {
      throw RadialBranchBroken(schedule[i], std::move(branch), e.what());
    }
  }
  return branch;
}

}  // namespace lane_emden
