#pragma once

#include "ratnorm/params.hpp"
#include "ratnorm/quadrature.hpp"

namespace ratnorm {

/// Sign quadrants of (X1, X2): Q1 = {X1 > 0, X2 > 0}, Q2 = {X1 < 0, X2 > 0},
/// Q3 = {X1 < 0, X2 < 0}, Q4 = {X1 > 0, X2 < 0}.
enum class Quadrant { Q1, Q2, Q3, Q4 };

/// Half-planes of the denominator: top = {X2 > 0}, bottom = {X2 < 0}.
enum class HalfPlane { Top, Bottom };

struct QuadrantProbs {
  double q1;
  double q2;
  double q3;
  double q4;
  double h_top;
  double h_bottom;

  [[nodiscard]] double of(Quadrant q) const noexcept;
  [[nodiscard]] double of(HalfPlane h) const noexcept;
  [[nodiscard]] double sum() const noexcept { return q1 + q2 + q3 + q4; }
};

/// Lower-orthant probability F(x1, x2) = P(X1 <= x1, X2 <= x2) as a single
/// Gaussian-weighted integral over the common factor of the pair. Either
/// argument may be +infinity, in which case its factor is 1.
/// Throws SingularCorrelation for rho == -1.
double bvn_orthant_f(const BivariateParams& params, double x1, double x2,
                     const Tolerances& tol = {});

/// All four quadrant masses and both half-plane masses. Each quadrant is
/// evaluated as the lower orthant at the origin of a sign-reflected pair,
/// so small masses keep their relative precision.
/// Throws SingularCorrelation for rho == -1.
QuadrantProbs quadrant_probs(const BivariateParams& params, const Tolerances& tol = {});

/// rho == -1: each mass is the probability of a Y-interval.
QuadrantProbs quadrant_probs_singular(const BivariateParams& params);

/// Dispatches on params.is_singular().
QuadrantProbs quadrant_masses(const BivariateParams& params, const Tolerances& tol = {});

}  // namespace ratnorm
