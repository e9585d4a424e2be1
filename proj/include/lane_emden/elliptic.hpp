#ifndef LANE_EMDEN_ELLIPTIC_HPP
#define LANE_EMDEN_ELLIPTIC_HPP

#include <Eigen/SparseCore>

#include <functional>
#include <vector>

#include "lane_emden/geometry.hpp"

namespace lane_emden {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Coupling of an interior row to a Dirichlet boundary point.
struct BoundaryCoupling {
  int row;
  double coeff;   // weight of the boundary value in -Delta_h at this row
  Point where;    // boundary intersection point
};

/// Five-point -Delta_h with Shortley-Weller rows next to the boundary.
class LaplaceOperator {
 public:
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const SparseMatrix& matrix() const { return matrix_; }
  const std::vector<BoundaryCoupling>& boundary() const { return boundary_; }
  bool symmetric() const { return symmetric_; }
  int size() const { return static_cast<int>(matrix_.rows()); }

  Field apply(const Field& f) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return matrix_ * v; }

  /// Right-hand side contribution of Dirichlet data g on the boundary:
  /// -Delta_h u = f with u = g on the boundary becomes A u = f + b(g).
  Eigen::VectorXd boundary_rhs(const std::function<double(const Point&)>& g) const;

 private:
  friend LaplaceOperator assemble(GridPtr grid);
  GridPtr grid_;
  SparseMatrix matrix_;
  std::vector<BoundaryCoupling> boundary_;
  bool symmetric_ = true;
};

LaplaceOperator assemble(GridPtr grid);

/// Iterative solve of A x = rhs to relative residual tol.
/// Jacobi-preconditioned CG for symmetric operators, BiCGSTAB otherwise;
/// iteration cap 50 sqrt(n). Throws NoConvergence.
Eigen::VectorXd solve_poisson(const LaplaceOperator& A, const Eigen::VectorXd& rhs,
                              double tol);
Field solve_poisson(const LaplaceOperator& A, const Field& rhs, double tol);

struct Eigenpair {
  double lambda1;
  Field phi1;  // max phi1 = 1, phi1 > 0
  double residual;
  int iterations;
};

/// Principal Dirichlet eigenpair by inverse power iteration.
Eigenpair principal_eigenpair(const LaplaceOperator& A, double tol);

}  // namespace lane_emden

#endif  // LANE_EMDEN_ELLIPTIC_HPP
