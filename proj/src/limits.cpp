#include "lane_emden/limits.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace lane_emden {

LimitFit fit_limit(std::span<const double> p, std::span<const double> q, int tail) {
  if (p.size() != q.size()) throw Error("fit needs one value per exponent");
  if (p.size() < 4) throw InsufficientSamples("refusing to extrapolate from fewer than 4 points");
  const int n = std::min<int>(tail, static_cast<int>(p.size()));
  const int off = static_cast<int>(p.size()) - n;
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const double x = p[off + i];
    A.row(i) << 1.0, 1.0 / x, std::log(x) / x;
    b[i] = q[off + i];
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
  const double rms = std::sqrt((A * c - b).squaredNorm() / n);
  return {c[0], c[1], c[2], rms, n};
}

LimitEstimates estimate_limits(std::span<const AsymptoticsReport> reports) {
  std::vector<double> ps, betas;
  for (const auto& r : reports) {
    ps.push_back(r.p);
    betas.push_back(r.energy.dirichlet);
  }
  LimitEstimates out;
  out.beta_hat = fit_limit(ps, betas);

  const std::size_t tail = std::min<std::size_t>(5, reports.size());
  std::size_t k_common = reports.back().peaks.size();
  for (std::size_t i = reports.size() - tail; i < reports.size(); ++i)
    k_common = std::min(k_common, reports[i].peaks.size());
  double sum_m2 = 0.0;
  for (std::size_t j = 0; j < k_common; ++j) {
    std::vector<double> m;
    for (const auto& r : reports) m.push_back(j < r.peaks.size() ? r.peaks[j].height : 0.0);
    out.m_hats.push_back(fit_limit(ps, m));
    sum_m2 += out.m_hats.back().limit * out.m_hats.back().limit;
  }

  constexpr double kPi = std::numbers::pi;
  constexpr double kE = std::numbers::e;
  auto row = [](std::string name, double obs, double pred) {
    return Comparison{std::move(name), obs, pred, std::abs(obs - pred) / std::abs(pred)};
  };
  out.rows.push_back(row("beta_hat vs 8 pi e", out.beta_hat.limit, 8.0 * kPi * kE));
  for (std::size_t j = 0; j < out.m_hats.size(); ++j)
    out.rows.push_back(
        row("m_hat[" + std::to_string(j) + "] vs sqrt(e)", out.m_hats[j].limit, std::sqrt(kE)));
  if (!reports.back().beta_local.empty())
    out.rows.push_back(row("beta_local at max p vs 8 pi", reports.back().beta_local.front(), 8.0 * kPi));
  if (sum_m2 > 0.0)
    out.rows.push_back(row("beta_hat vs 8 pi sum m_hat^2", out.beta_hat.limit, 8.0 * kPi * sum_m2));
  return out;
}

}  // namespace lane_emden
