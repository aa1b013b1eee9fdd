#pragma once

namespace ratnorm {

/// Standard normal density.
double phi(double z) noexcept;
/// Standard normal CDF, computed from erfc so that tails keep full
/// relative precision.
double cap_phi(double z) noexcept;

double erf(double x) noexcept;
double erfc(double x) noexcept;
/// exp(w^2) erfc(w). Finite for every w >= 0; overflows to +inf below about
/// w = -26.6.
double erfc_scaled(double w) noexcept;

/// h(w) = exp(w^2) (exp(-w^2) - sqrt(pi) w erfc(w)) = 1 - sqrt(pi) w erfcx(w).
///
/// Strictly positive. Above kHAsymptoticSwitch it is summed from the
/// asymptotic series 1/(2w^2) - 3/(4w^4) + 15/(8w^6) - ... instead of the
/// cancellation-prone difference. Throws Error(Overflow) when the value is
/// not representable (w below about -26.6); log_h covers that range.
double h(double omega);
double log_h(double omega) noexcept;

/// exp(-w^2) h(w) = exp(-w^2) - sqrt(pi) w erfc(w), the combination that
/// multiplies exp(-mu2^2 / 2 sigma2^2) in the tail coefficient. Bounded for
/// w <= 0, where h itself explodes.
double h_damped(double omega) noexcept;
double log_h_damped(double omega) noexcept;

/// h'(w) = 2w - sqrt(pi) (1 + 2w^2) erfcx(w).
double h_prime(double omega) noexcept;

inline constexpr double kHAsymptoticSwitch = 6.0;

struct HBounds {
  double lower;
  double upper;
};

/// Brackets for h on w > 0 derived from
///   1/(w + sqrt(w^2 + 2)) < exp(w^2) int_w^inf exp(-u^2) du <= 1/(w + sqrt(w^2 + 4/pi)).
/// Throws Error(InvalidArgument) for w <= 0.
HBounds h_bounds(double omega);

/// Brackets for h' on w >= 0 from the same inequality. Throws
/// Error(InvalidArgument) for w < 0.
HBounds h_prime_bounds(double omega);

}  // namespace ratnorm
