#include "ratnorm/quadprob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ratnorm/error.hpp"
#include "ratnorm/specfun.hpp"

namespace ratnorm {
namespace {

// The common-factor integrand carries phi(z); beyond |z| = 12 it is below
// 1e-31 of its peak.
constexpr double kZWindow = 12.0;

}  // namespace

double QuadrantProbs::of(Quadrant q) const noexcept {
  switch (q) {
    case Quadrant::Q1: return q1;
    case Quadrant::Q2: return q2;
    case Quadrant::Q3: return q3;
    case Quadrant::Q4: return q4;
  }
  return 0.0;
}

double QuadrantProbs::of(HalfPlane h) const noexcept {
  return h == HalfPlane::Top ? h_top : h_bottom;
}

double bvn_orthant_f(const BivariateParams& p, double x1, double x2, const Tolerances& tol) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "orthant integral needs |rho| < 1");
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (x1 == -inf || x2 == -inf) return 0.0;
  const bool free1 = x1 == inf;
  const bool free2 = x2 == inf;
  if (free1 && free2) return 1.0;

  const double abs_rho = std::abs(p.rho());
  const double sqrt_rho = std::sqrt(abs_rho);
  const double sign = p.rho() < 0.0 ? -1.0 : 1.0;  // sgn(0) taken as +1
  const double scale = 1.0 / std::sqrt(1.0 - abs_rho);
  const double a1 = (x1 - p.mu1()) / p.sigma1();
  const double a2 = (x2 - p.mu2()) / p.sigma2();

  if (abs_rho == 0.0) {
    return (free1 ? 1.0 : cap_phi(a1)) * (free2 ? 1.0 : cap_phi(a2));
  }

  auto integrand = [&](double z) {
    const double f1 = free1 ? 1.0 : cap_phi((sqrt_rho * z + a1) * scale);
    const double f2 = free2 ? 1.0 : cap_phi((sign * sqrt_rho * z + a2) * scale);
    return f1 * f2 * phi(z);
  };
  // As |rho| -> 1 each Phi factor sharpens into a step at its zero crossing;
  // splitting there, and a few step widths either side, keeps each panel
  // on a single scale.
  std::vector<double> breaks{-kZWindow, kZWindow};
  const double width = 1.0 / (scale * sqrt_rho);
  auto add_step = [&](double z0) {
    for (double m : {0.0, -8.0, -1.0, 1.0, 8.0}) breaks.push_back(z0 + m * width);
  };
  if (!free1) add_step(-a1 / sqrt_rho);
  if (!free2) add_step(-sign * a2 / sqrt_rho);
  std::sort(breaks.begin(), breaks.end());
  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(breaks[i], -kZWindow);
    const double hi = std::min(breaks[i + 1], kZWindow);
    if (hi > lo) panels.emplace_back(lo, hi);
  }
  double crude = 0.0;
  for (const auto& [lo, hi] : panels) crude += detail::gk_panel(integrand, lo, hi).l1;
  const double abs_tol =
      std::max(tol.orthant_rel * std::abs(crude), std::numeric_limits<double>::min());
  const double share = abs_tol / static_cast<double>(panels.size());
  double value = 0.0;
  for (const auto& [lo, hi] : panels) {
    value += detail::integrate_gk_abs(integrand, lo, hi, share);
  }
  return std::clamp(value, 0.0, 1.0);
}

QuadrantProbs quadrant_probs(const BivariateParams& p, const Tolerances& tol) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "use quadrant_probs_singular for rho = -1");
  }
  const double inf = std::numeric_limits<double>::infinity();
  QuadrantProbs out{};
  out.q3 = bvn_orthant_f(p, 0.0, 0.0, tol);
  out.q1 = bvn_orthant_f(p.negated_means(), 0.0, 0.0, tol);
  // P(X1 < 0, X2 > 0) = P(X1 < 0, -X2 < 0), and symmetrically for Q4.
  out.q2 = bvn_orthant_f(p.reflected_denominator(), 0.0, 0.0, tol);
  out.q4 = bvn_orthant_f(p.reflected_numerator(), 0.0, 0.0, tol);
  out.h_bottom = bvn_orthant_f(p, inf, 0.0, tol);
  out.h_top = bvn_orthant_f(p.reflected_denominator(), inf, 0.0, tol);
  return out;
}

QuadrantProbs quadrant_probs_singular(const BivariateParams& p) {
  if (!p.is_singular()) {
    throw Error(ErrorCode::KindMismatch, "quadrant_probs_singular requires rho = -1");
  }
  // X1 = mu1 + sigma1 Y > 0  <=>  Y > -mu1/sigma1 =: y1
  // X2 = mu2 - sigma2 Y > 0  <=>  Y <  mu2/sigma2 =: y2
  const double y1 = -p.mu1() / p.sigma1();
  const double y2 = p.mu2() / p.sigma2();
  auto interval = [](double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    // Evaluate on the side with the smaller tail for precision.
    if (lo >= 0.0) return cap_phi(-lo) - cap_phi(-hi);
    return cap_phi(hi) - cap_phi(lo);
  };
  QuadrantProbs out{};
  out.q1 = interval(y1, y2);
  out.q2 = cap_phi(std::min(y1, y2));
  out.q3 = interval(y2, y1);
  out.q4 = cap_phi(-std::max(y1, y2));
  out.h_top = cap_phi(y2);
  out.h_bottom = cap_phi(-y2);
  return out;
}

QuadrantProbs quadrant_masses(const BivariateParams& p, const Tolerances& tol) {
  return p.is_singular() ? quadrant_probs_singular(p) : quadrant_probs(p, tol);
}

}  // namespace ratnorm
