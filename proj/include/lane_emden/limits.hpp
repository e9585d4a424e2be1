#ifndef LANE_EMDEN_LIMITS_HPP
#define LANE_EMDEN_LIMITS_HPP

#include <span>
#include <string>
#include <vector>

#include "lane_emden/asymptotics.hpp"

namespace lane_emden {

/// Least-squares fit q(p) = a + b/p + c log(p)/p; `a` estimates the limit.
struct LimitFit {
  double limit;
  double b;
  double c;
  double residual;  // rms misfit over the fitted points
  int points;
};

/// Fits the last `tail` points. Throws InsufficientSamples below 4 points.
LimitFit fit_limit(std::span<const double> p, std::span<const double> q, int tail = 5);

struct Comparison {
  std::string quantity;
  double observed;
  double prediction;
  double rel_gap;
};

struct LimitEstimates {
  LimitFit beta_hat;
  std::vector<LimitFit> m_hats;  // per peak index present along the whole tail
  std::vector<Comparison> rows;
};

/// Extrapolated energy and peak heights from a branch of reports.
LimitEstimates estimate_limits(std::span<const AsymptoticsReport> reports);

}  // namespace lane_emden

#endif  // LANE_EMDEN_LIMITS_HPP
