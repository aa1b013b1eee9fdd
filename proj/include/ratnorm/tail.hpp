#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ratnorm/params.hpp"
#include "ratnorm/quadprob.hpp"

namespace ratnorm {

/// max{2 sigma1/sigma2, 1}, raised to 1 + 1e-6 so that log x0 > 0.
double threshold_x0(const BivariateParams& params);

/// f0 in f(x|Q1) ~ f0 x^-2. Throws SingularCorrelation, DegenerateConditioning.
double tail_coefficient(const BivariateParams& params);
double tail_coefficient(const BivariateParams& params, const QuadrantProbs& probs);
/// log f0, finite even where f0 underflows.
double log_tail_coefficient(const BivariateParams& params, const QuadrantProbs& probs);

/// (x, log f(x|Q1) / log x) for each x. Throws XBelowThreshold unless every
/// x exceeds threshold_x0.
std::vector<std::pair<double, double>> tail_exponent_diagnostic(const BivariateParams& params,
                                                                const std::vector<double>& xs);

struct RemainderBounds {
  double r1;
  double r2;
  double r3;
  double r4_total;
};

/// Explicit bounds on the remainder of the large-x expansion of
/// log f(x|Q1)/log x, valid for x >= 2 x0. For zeta >= 0 |h'(zeta)| is the
/// larger magnitude of the h_prime_bounds endpoints, for zeta < 0 it is
/// |h'| itself; zeta ranges over {omega(2 x0), omega0}.
/// Throws ThresholdNotAboveOne for x0 <= 1 and UndefinedRatio when a1 = 0.
RemainderBounds remainder_bounds(const BivariateParams& params, double x0);

/// The expansion without remainder:
///   -2 + [-C/2 + log((2 pi)^-1/P(Q1)) - log(sigma2/(sigma1 sqrt(1-rho^2))) + log h(omega0)] / log x
/// which equals -2 + log f0 / log x. Requires x > 1.
double tail_expansion_prediction(const BivariateParams& params, double x);
double tail_expansion_prediction(const BivariateParams& params, double x,
                                 const QuadrantProbs& probs);

inline constexpr double kRegimeOmegaThreshold = 3.0;

struct RegimeEstimate {
  int regime;           ///< 1 for omega0 < -3, 2 for omega0 > 3
  double log_density;
};

/// Approximate log f(x|Q1) in the two extreme regimes:
///   (i)  omega0 < -3: -2 log x - mu2^2/(2 sigma2^2) - log(sqrt(2 pi) P(Q1))
///                     + log(mu1/sigma2 - rho mu2 sigma1/sigma2^2)
///   (ii) omega0 > 3:  -2 log x + log((2 pi)^-1/P(Q1)) + log h(omega0)
///                     - log(sigma2/(sigma1 sqrt(1-rho^2))) - C/2
/// Throws RegimeNotApplicable for |omega0| <= 3, XBelowThreshold for x <= x0.
RegimeEstimate regime_approximation(const BivariateParams& params, double x);

struct TailReport {
  double f0;
  double log_f0;
  double x0;
  std::vector<std::pair<double, double>> exponent_at;
  /// r4_total with the threshold taken as max(x0, x/2); empty when R3 is
  /// undefined (a1 = 0).
  std::vector<std::pair<double, std::optional<double>>> remainder_bound_at;
};

TailReport tail_report(const BivariateParams& params, const std::vector<double>& xs);

}  // namespace ratnorm
