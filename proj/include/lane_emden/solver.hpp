#ifndef LANE_EMDEN_SOLVER_HPP
#define LANE_EMDEN_SOLVER_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lane_emden/elliptic.hpp"

namespace lane_emden {

/// Converged positive solution of -Delta_h u = u^p at a single exponent.
struct Solution {
  double p;
  Field u;
  double residual_norm;  // ||A u - u^p|| / ||u^p||
  int newton_iters;
  bool positive;
  bool underresolved;  // h > mu_p / 4
};

/// (p * m^{p-1})^{-1/2}, computed in log space.
double bubble_scale(double p, double height);

/// Amplitude c with c^{p-1} int phi^{p+1} = lambda1 c int phi^2.
double galerkin_amplitude(const Eigenpair& eig, double p);
Field initial_guess(const Grid& grid, const Eigenpair& eig, double p);

/// Sum of truncated bubbles m (1 + U((x - z_j)/eps)/p)_+ with m = sqrt(e).
/// Experimental seed for multi-peak branches; no convergence promise.
Field multi_peak_guess(GridPtr grid, std::span<const Point> centers, double p);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iters = 60;
  int max_halvings = 20;
  double positivity_floor = 1e-8;  // relative to ||u||_inf
};

/// Damped Newton for R(u) = A u - |u|^{p-1} u. Throws NoConvergence,
/// LostPositivity, SingularJacobian.
Solution newton_solve(const LaplaceOperator& A, double p, const Field& guess,
                      const NewtonOptions& opts);
inline Solution newton_solve(const LaplaceOperator& A, double p, const Field& guess,
                             double tol, int max_iters) {
  NewtonOptions opts;
  opts.tol = tol;
  opts.max_iters = max_iters;
  return newton_solve(A, p, guess, opts);
}

struct Branch {
  Domain domain = Domain::unit_square();
  double h = 0.0;
  std::vector<double> schedule;
  double tol = 0.0;
  std::vector<Solution> solutions;
};

/// Branch cut short at p_failed; carries everything computed before it.
template <class BranchT>
class BranchBrokenT : public Error {
 public:
  BranchBrokenT(double p_failed, BranchT partial, const std::string& why)
      : Error("branch broken at p = " + std::to_string(p_failed) + ": " + why),
        p_failed_(p_failed),
        partial_(std::move(partial)) {}
  double p_failed() const { return p_failed_; }
  const BranchT& partial() const { return partial_; }

 private:
  double p_failed_;
  BranchT partial_;
};

using BranchBroken = BranchBrokenT<Branch>;

/// Geometric schedule start, start*ratio, ... not exceeding max (max appended).
std::vector<double> geometric_schedule(double start, double ratio, double max);

/// Checks a schedule: strictly increasing, every entry > 1, and the first >= min_first.
void validate_schedule(std::span<const double> schedule, double min_first);

/// Steps from a solved state to `target`, halving the step at most
/// `max_bisections` times on failure.
template <class State, class Solve>
State continue_to(const State& from, double from_p, double target, Solve&& solve,
                  int max_bisections) {
  State current = from;
  double q = from_p;
  double step = target - q;
  int bisections = 0;
  while (q < target) {
    const double next = std::min(q + step, target);
    try {
      current = solve(next, current);
      q = next;
    } catch (const NoConvergence&) {
      if (++bisections > max_bisections) throw;
      step *= 0.5;
    } catch (const LostPositivity&) {
      if (++bisections > max_bisections) throw;
      step *= 0.5;
    } catch (const SingularJacobian&) {
      if (++bisections > max_bisections) throw;
      step *= 0.5;
    }
  }
  return current;
}

struct ContinuationOptions {
  NewtonOptions newton;
  int max_bisections = 5;
  /// Optional seed for the first schedule entry (otherwise initial_guess).
  std::optional<Field> first_guess;
  /// Called after each emitted solution.
  std::function<void(const Solution&)> on_solution;
};

/// One Solution per schedule entry, each seeded by its predecessor. Throws
/// BranchBroken with the partial branch.
Branch continue_branch(const Grid& grid, const LaplaceOperator& A, const Eigenpair& eig,
                       std::span<const double> schedule, const ContinuationOptions& opts);
inline Branch continue_branch(const Grid& grid, const LaplaceOperator& A,
                              const Eigenpair& eig, std::span<const double> schedule,
                              double tol) {
  ContinuationOptions opts;
  opts.newton.tol = tol;
  return continue_branch(grid, A, eig, schedule, opts);
}

}  // namespace lane_emden

#endif  // LANE_EMDEN_SOLVER_HPP
