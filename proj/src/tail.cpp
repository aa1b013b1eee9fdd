#include "ratnorm/tail.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ratnorm/density.hpp"
#include "ratnorm/error.hpp"
#include "ratnorm/specfun.hpp"

namespace ratnorm {
namespace {

constexpr double kPi = std::numbers::pi;

QuadrantProbs probs_for(const BivariateParams& p) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "tail asymptotics need |rho| < 1");
  }
  return quadrant_probs(p);
}

double q1_mass(const QuadrantProbs& probs) {
  if (!(probs.q1 >= kMinConditioningMass)) {
    throw Error(ErrorCode::DegenerateConditioning, "P(Q1) is below 1e-300");
  }
  return probs.q1;
}

// log of (sigma1/sigma2) sqrt(1 - rho^2) / (2 pi P(Q1)) exp(-mu2^2/(2 sigma2^2))
double log_f0_prefactor(const BivariateParams& p, double mass) {
  const double z2 = p.mu2() / p.sigma2();
  return std::log(p.sigma1() / p.sigma2()) + 0.5 * std::log1p(-p.rho() * p.rho()) -
         std::log(2.0 * kPi * mass) - 0.5 * z2 * z2;
}

double abs_h_prime_at(double zeta) {
  if (zeta >= 0.0) {
    const HBounds b = h_prime_bounds(zeta);
    return std::max(std::abs(b.lower), std::abs(b.upper));
  }
  return std::abs(h_prime(zeta));
}

void require_above_threshold(const BivariateParams& p, double x) {
  const double x0 = threshold_x0(p);
  if (!(x > x0)) {
    std::ostringstream os;
    os << "x = " << x << " is not above the threshold x0 = " << x0;
    throw Error(ErrorCode::XBelowThreshold, os.str());
  }
}

}  // namespace

double threshold_x0(const BivariateParams& p) {
  const double x0 = std::max(2.0 * p.sigma1() / p.sigma2(), 1.0);
  return std::max(x0, 1.0 + 1e-6);
}

double tail_coefficient(const BivariateParams& p) { return tail_coefficient(p, probs_for(p)); }

double tail_coefficient(const BivariateParams& p, const QuadrantProbs& probs) {
  const double mass = q1_mass(probs);
  const double z2 = p.mu2() / p.sigma2();
  const double omega0 = coeffs_at(p, 1.0).omega0;
  const double pre = (p.sigma1() / p.sigma2()) * std::sqrt(1.0 - p.rho() * p.rho()) /
                     (2.0 * kPi * mass);
  const double direct = pre * std::exp(-0.5 * z2 * z2) * h_damped(omega0);
  if (direct > 0.0 && std::isfinite(direct)) return direct;
  return std::exp(log_tail_coefficient(p, probs));
}

double log_tail_coefficient(const BivariateParams& p, const QuadrantProbs& probs) {
  const double mass = q1_mass(probs);
  const double omega0 = coeffs_at(p, 1.0).omega0;
  return log_f0_prefactor(p, mass) + log_h_damped(omega0);
}

std::vector<std::pair<double, double>> tail_exponent_diagnostic(const BivariateParams& p,
                                                                const std::vector<double>& xs) {
  const QuadrantProbs probs = probs_for(p);
  std::vector<std::pair<double, double>> out;
  out.reserve(xs.size());
  for (double x : xs) require_above_threshold(p, x);
  for (double x : xs) {
    out.emplace_back(x, log_density_q1(p, x, probs) / std::log(x));
  }
  return out;
}

RemainderBounds remainder_bounds(const BivariateParams& p, double x0) {
  if (!(x0 > 1.0)) {
    std::ostringstream os;
    os << "remainder bounds need x0 > 1, got " << x0;
    throw Error(ErrorCode::ThresholdNotAboveOne, os.str());
  }
  const QuadraticCoeffs c = coeffs_at(p, 2.0 * x0);
  if (c.a1 == 0.0) {
    throw Error(ErrorCode::UndefinedRatio, "b1/a1 is undefined because a1 = 0");
  }
  const double ratio = p.sigma1() / p.sigma2();
  const double log_x0 = std::log(x0);
  RemainderBounds r{};
  r.r1 = 2.0 * ratio * std::abs(p.rho()) / (x0 * log_x0);
  r.r2 = 2.0 * ratio * ratio / (x0 * x0);
  const double hp = std::max(abs_h_prime_at(c.omega), abs_h_prime_at(c.omega0));
  const double bracket =
      std::abs(c.b1 / c.a1) + 1.0 / (2.0 * c.a2sq) + 1.0 / (8.0 * c.a2sq * c.a2sq);
  r.r3 = std::abs(c.omega0) * bracket * hp / (x0 * log_x0);
  r.r4_total = r.r1 + r.r2 + r.r3;
  return r;
}

double tail_expansion_prediction(const BivariateParams& p, double x) {
  return tail_expansion_prediction(p, x, probs_for(p));
}

double tail_expansion_prediction(const BivariateParams& p, double x, const QuadrantProbs& probs) {
  if (!(x > 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "expansion needs x > 1");
  }
  return -2.0 + log_tail_coefficient(p, probs) / std::log(x);
}

RegimeEstimate regime_approximation(const BivariateParams& p, double x) {
  const QuadrantProbs probs = probs_for(p);
  const double mass = q1_mass(probs);
  require_above_threshold(p, x);
  const QuadraticCoeffs c = coeffs_at(p, x);
  const double s1 = p.sigma1();
  const double s2 = p.sigma2();
  const double log_x = std::log(x);
  if (c.omega0 < -kRegimeOmegaThreshold) {
    const double z2 = p.mu2() / s2;
    const double slope = p.mu1() / s2 - p.rho() * p.mu2() * s1 / (s2 * s2);
    const double value = -2.0 * log_x - 0.5 * z2 * z2 -
                         std::log(std::sqrt(2.0 * kPi) * mass) + std::log(slope);
    return {1, value};
  }
  if (c.omega0 > kRegimeOmegaThreshold) {
    const double value = -2.0 * log_x - std::log(2.0 * kPi * mass) + log_h(c.omega0) -
                         std::log(s2 / (s1 * std::sqrt(1.0 - p.rho() * p.rho()))) -
                         0.5 * c.c_const;
    return {2, value};
  }
  std::ostringstream os;
  os << "omega0 = " << c.omega0 << " lies inside [-3, 3]";
  throw Error(ErrorCode::RegimeNotApplicable, os.str());
}

TailReport tail_report(const BivariateParams& p, const std::vector<double>& xs) {
  const QuadrantProbs probs = probs_for(p);
  TailReport report{};
  report.f0 = tail_coefficient(p, probs);
  report.log_f0 = log_tail_coefficient(p, probs);
  report.x0 = threshold_x0(p);
  report.exponent_at = tail_exponent_diagnostic(p, xs);
  for (double x : xs) {
    std::optional<double> bound;
    try {
      bound = remainder_bounds(p, std::max(report.x0, 0.5 * x)).r4_total;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UndefinedRatio) throw;
    }
    report.remainder_bound_at.emplace_back(x, bound);
  }
  return report;
}

}  // namespace ratnorm
