#pragma once

#include <vector>

#include "ratnorm/params.hpp"
#include "ratnorm/quadprob.hpp"
#include "ratnorm/quadrature.hpp"

namespace ratnorm {

/// Conditioning masses below this are treated as empty events.
inline constexpr double kMinConditioningMass = 1e-300;

enum class DensityKind {
  Q1,
  Q2,
  Q3,
  Q4,
  HalfTop,
  HalfBottom,
  Unconditional,
  SingularRhoMinus1,
  CauchyReference,
  ConstDenomApprox,
};

enum class GridSpacing { Linear, Log };

struct DensityCurve {
  std::vector<double> xs;
  std::vector<double> values;
  DensityKind kind;
  BivariateParams params;
};

/// J(x) = int_0^inf s f(xs, s) ds, the mass density of X1/X2 restricted to
/// {X2 > 0}, in closed form:
///   J(x) = exp(-D/2) g(omega) / (2 pi sigma1 sigma2 sqrt(1 - rho^2) A)
/// with D = C - B^2/A and g the damped h. For x > 0 this is f(x|Q1) P(Q1),
/// for x < 0 it is f(x|Q2) P(Q2). Throws SingularCorrelation for rho = -1.
double half_plane_joint_density(const BivariateParams& params, double x);
double log_half_plane_joint_density(const BivariateParams& params, double x);

/// f(x | X1 > 0, X2 > 0); zero for x <= 0.
double density_q1(const BivariateParams& params, double x);
double density_q1(const BivariateParams& params, double x, const QuadrantProbs& probs);

/// Requires x > 0.
double log_density_q1(const BivariateParams& params, double x);
double log_density_q1(const BivariateParams& params, double x, const QuadrantProbs& probs);

/// f(x|Q) P(Q). Q1 and Q3 in closed form; Q2 and Q4 by adaptive quadrature
/// of |s| f(xs, s) over the relevant half-line.
double quadrant_joint_density(const BivariateParams& params, Quadrant q, double x,
                              const Tolerances& tol = {});

double density_quadrant(const BivariateParams& params, Quadrant q, double x,
                        const Tolerances& tol = {});
double density_quadrant(const BivariateParams& params, Quadrant q, double x,
                        const QuadrantProbs& probs, const Tolerances& tol = {});

/// f(x | X2 > 0) or f(x | X2 < 0), defined on the whole real line.
double density_half_plane(const BivariateParams& params, HalfPlane half, double x);
double density_half_plane(const BivariateParams& params, HalfPlane half, double x,
                          const QuadrantProbs& probs);

/// Sum of the two half-plane mass densities. Returns 0 where the result is
/// subnormal.
double density_unconditional(const BivariateParams& params, double x);

/// rho = -1 closed form; exactly 0 at the pole x = -sigma1/sigma2.
/// Throws InvalidSingularParams unless mu1, mu2, sigma1, sigma2 > 0 and
/// KindMismatch unless rho = -1.
double density_singular(const BivariateParams& params, double x);
/// CDF of the rho = -1 quotient, in closed form.
double cdf_singular(const BivariateParams& params, double x);

/// Density of X1/mu2: normal with mean mu1/mu2 and sd sigma1/mu2.
/// Throws InvalidArgument for mu2 <= 0.
double density_const_denominator(const BivariateParams& params, double x);

/// Bound on the gap between the constant-denominator density and the
/// exact one; m_bound bounds the second derivative of the slice integrand.
double const_denominator_error_bound(const BivariateParams& params, double m_bound);

/// (2/pi)/(1 + x^2) on x >= 0 when conditioned (0 for x < 0), otherwise
/// 1/(pi (1 + x^2)) on the whole line.
double cauchy_reference(double x, bool conditioned_positive);

/// Evaluates one kind of density for fixed parameters, with the
/// conditioning masses computed once at construction.
class DensityEvaluator {
 public:
  /// Throws KindMismatch when kind and params disagree about rho = -1, and
  /// DegenerateConditioning when the conditioning event is empty.
  DensityEvaluator(const BivariateParams& params, DensityKind kind, const Tolerances& tol = {});

  /// CauchyReference evaluates the conditioned form (2/pi)/(1 + x^2).
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] DensityKind kind() const noexcept { return kind_; }
  [[nodiscard]] const BivariateParams& params() const noexcept { return params_; }
  /// Mass of the conditioning event (1 for unconditional kinds).
  [[nodiscard]] double conditioning_mass() const noexcept { return mass_; }

 private:
  BivariateParams params_;
  DensityKind kind_;
  Tolerances tol_;
  QuadrantProbs probs_{};
  double mass_ = 1.0;
};

/// Which half-lines carry the density: Q1, Q3 and the conditioned Cauchy
/// reference live on x > 0, Q2 and Q4 on x < 0, the rest on both.
struct Support {
  bool negative;
  bool positive;
};
Support support_of(DensityKind kind) noexcept;

/// n_points grid over [x_min, x_max] with exact endpoints.
/// Throws InvalidArgument for an empty range, n_points < 2, or log spacing
/// with x_min <= 0.
std::vector<double> make_grid(double x_min, double x_max, std::size_t n_points,
                              GridSpacing spacing);

/// Evaluates kind on an n_points grid over [x_min, x_max]. Grid points are
/// evaluated in parallel; output ordering is that of the grid.
/// Grid errors as make_grid; kind errors as DensityEvaluator.
DensityCurve sample_curve(const BivariateParams& params, DensityKind kind, double x_min,
                          double x_max, std::size_t n_points, GridSpacing spacing,
                          const Tolerances& tol = {});

}  // namespace ratnorm
