#pragma once

#include <algorithm>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ratnorm {

/// Numerical tolerances used by the quadrature-backed operations. The
/// defaults are the documented module defaults; the CLI exposes each one.
struct Tolerances {
  /// Relative tolerance of the 1-D orthant integrals.
  double orthant_rel = 1e-12;
  /// Relative tolerance of the s2-slice integrals behind the Q2/Q4 densities.
  double slice_rel = 1e-10;
  /// Absolute accuracy target of tabulated numeric CDFs.
  double cdf_abs = 1e-9;
};

namespace detail {

inline constexpr unsigned kMaxBisectionDepth = 20;

/// One 15-point Kronrod panel on [a, b] with its error estimate and L1 norm,
/// both on the scale of [a, b].
struct GkPanel {
  double value;
  double error;
  double l1;
};

template <class F>
GkPanel gk_panel(const F& f, double a, double b) {
  double err = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err, &l1);
  // Boost reports the error of the panel mapped onto [-1, 1].
  return {value, err * 0.5 * (b - a), l1};
}

/// Adaptive bisection to a global absolute tolerance: a panel is accepted
/// once its error estimate is below its share of abs_tol.
template <class F>
double integrate_gk_abs(const F& f, double a, double b, double abs_tol,
                        unsigned depth = kMaxBisectionDepth) {
  const GkPanel p = gk_panel(f, a, b);
  if (p.error <= abs_tol || depth == 0) return p.value;
  const double mid = 0.5 * (a + b);
  return integrate_gk_abs(f, a, mid, 0.5 * abs_tol, depth - 1) +
         integrate_gk_abs(f, mid, b, 0.5 * abs_tol, depth - 1);
}

/// Adaptive Gauss-Kronrod on [a, b] to rel_tol times the L1 norm of the
/// integrand, as estimated from a first panel.
template <class F>
double integrate_gk(const F& f, double a, double b, double rel_tol) {
  const GkPanel p = gk_panel(f, a, b);
  const double abs_tol = std::max(rel_tol * p.l1, std::numeric_limits<double>::min());
  return integrate_gk_abs(f, a, b, abs_tol);
}

}  // namespace detail
}  // namespace ratnorm
