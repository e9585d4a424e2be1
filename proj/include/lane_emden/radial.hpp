#ifndef LANE_EMDEN_RADIAL_HPP
#define LANE_EMDEN_RADIAL_HPP

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lane_emden/solver.hpp"

namespace lane_emden {

/// Uniform mesh in t = log r for radial functions on the disk of radius R.
///
/// Unknowns sit at t_i = t_min + i dt, i = 0..n-1; t_n = log R carries the
/// Dirichlet zero. In t the Laplacian becomes e^{-2t} d^2/dt^2, so bubbles
/// of width e^{-p/4} are resolved with O(1) nodes per unit of log-radius.
class RadialMesh {
 public:
  RadialMesh(double radius, double t_min, int n);

  double radius() const { return radius_; }
  double t_min() const { return t_min_; }
  double t_max() const { return std::log(radius_); }
  double dt() const { return dt_; }
  int size() const { return n_; }
  double t(int i) const { return t_min_ + i * dt_; }
  double r(int i) const { return std::exp(t(i)); }
  /// Trapezoid weight of node i in int ... dt (half weight at i = 0).
  double weight(int i) const { return i == 0 ? 0.5 * dt_ : dt_; }

  friend bool operator==(const RadialMesh& a, const RadialMesh& b) {
    return a.radius_ == b.radius_ && a.t_min_ == b.t_min_ && a.n_ == b.n_;
  }

 private:
  double radius_;
  double t_min_;
  int n_;
  double dt_;
};

using RadialMeshPtr = std::shared_ptr<const RadialMesh>;

/// Radial function sampled on a RadialMesh, zero at r = R.
class RadialProfile {
 public:
  RadialProfile(RadialMeshPtr mesh, Eigen::VectorXd values);

  const RadialMesh& mesh() const { return *mesh_; }
  const RadialMeshPtr& mesh_ptr() const { return mesh_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }
  double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

  /// Cubic Hermite interpolation in t; constant below r_min, zero beyond R.
  double value_at_radius(double r) const;
  /// du/dr at radius r.
  double derivative_at_radius(double r) const;
  /// du/dt at node i (one-sided at the outer boundary).
  double node_derivative_t(int i) const;

  /// 2 pi int_0^rho g(u(r)) r dr.
  double ball_integral(double rho, const std::function<double(double)>& g) const;
  /// int |grad u|^2 over the disk.
  double dirichlet_integral() const;

 private:
  double value_at_t(double t) const;
  double slope_at_t(double t) const;
  double node_slope(int i) const;
  double at(int i) const { return i >= size() ? 0.0 : values_[std::max(i, 0)]; }

  RadialMeshPtr mesh_;
  Eigen::VectorXd values_;
};

struct RadialSolution {
  double p;
  RadialProfile u;
  double residual_norm;
  int newton_iters;
  bool positive;
};

struct RadialEigenpair {
  double lambda1;
  RadialProfile phi1;  // max = 1
};

/// Principal eigenpair of -u_tt = lambda e^{2t} u on the mesh.
RadialEigenpair radial_principal_eigenpair(RadialMeshPtr mesh, double tol);
double galerkin_amplitude(const RadialEigenpair& eig, double p);

/// Damped Newton on the radial discretization.
RadialSolution radial_newton_solve(double p, const RadialProfile& guess,
                                   const NewtonOptions& opts);

struct RadialBranch {
  double radius = 1.0;
  double t_min = 0.0;
  int nodes = 0;
  std::vector<double> schedule;
  double tol = 0.0;
  std::vector<RadialSolution> solutions;
};

using RadialBranchBroken = BranchBrokenT<RadialBranch>;

struct RadialContinuationOptions {
  NewtonOptions newton;
  /// The bubble core moves about a quarter unit of log-radius per unit of p;
  /// large p-steps need more halvings than on the lattice.
  int max_bisections = 12;
  std::optional<RadialProfile> first_guess;
  std::function<void(const RadialSolution&)> on_solution;
};

RadialBranch continue_radial_branch(RadialMeshPtr mesh, std::span<const double> schedule,
                                    const RadialContinuationOptions& opts);

}  // namespace lane_emden

#endif  // LANE_EMDEN_RADIAL_HPP
