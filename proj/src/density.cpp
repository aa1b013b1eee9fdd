#include "ratnorm/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ratnorm/error.hpp"
#include "ratnorm/parallel.hpp"
#include "ratnorm/specfun.hpp"

namespace ratnorm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlice = 12.0;  // slice window half-width in units of 1/sqrt(A)

double require_mass(double mass, const char* what) {
  if (!(mass >= kMinConditioningMass)) {
    std::ostringstream os;
    os << "conditioning event " << what << " has probability " << mass;
    throw Error(ErrorCode::DegenerateConditioning, os.str());
  }
  return mass;
}

const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::Q1: return "Q1";
    case Quadrant::Q2: return "Q2";
    case Quadrant::Q3: return "Q3";
    case Quadrant::Q4: return "Q4";
  }
  return "?";
}

double joint_prefactor(const BivariateParams& p) {
  return 1.0 / (2.0 * kPi * p.sigma1() * p.sigma2() * std::sqrt(1.0 - p.rho() * p.rho()));
}

// int over s in the given half-line of |s| f(xs, s) ds, with the Gaussian
// factor centred at the minimiser of Q so that exp(-D/2) is pulled out
// exactly.
double slice_integral(const BivariateParams& p, double x, bool positive_s, double rel_tol) {
  const QuadraticCoeffs c = coeffs_at(p, x);
  const double a = c.a_of_x;
  const double s_star = -c.b_of_x / a;
  const double width = kSlice / std::sqrt(a);
  const double d = quadratic_minimum(p, c, x);
  const double outer = joint_prefactor(p) * std::exp(-0.5 * d);
  if (outer == 0.0) return 0.0;

  double lo = 0.0;
  double hi = 0.0;
  if (positive_s) {
    lo = std::max(0.0, s_star - width);
    hi = std::max(s_star, 0.0) + width;
  } else {
    lo = std::min(s_star, 0.0) - width;
    hi = std::min(0.0, s_star + width);
  }
  if (!(hi > lo)) return 0.0;
  auto integrand = [&](double s) {
    const double u = s - s_star;
    return std::abs(s) * std::exp(-0.5 * a * u * u);
  };
  return outer * detail::integrate_gk(integrand, lo, hi, rel_tol);
}

}  // namespace

double half_plane_joint_density(const BivariateParams& p, double x) {
  const QuadraticCoeffs c = coeffs_at(p, x);
  const double d = quadratic_minimum(p, c, x);
  return joint_prefactor(p) / c.a_of_x * std::exp(-0.5 * d) * h_damped(c.omega);
}

double log_half_plane_joint_density(const BivariateParams& p, double x) {
  const QuadraticCoeffs c = coeffs_at(p, x);
  const double d = quadratic_minimum(p, c, x);
  return std::log(joint_prefactor(p)) - std::log(c.a_of_x) - 0.5 * d + log_h_damped(c.omega);
}

double density_q1(const BivariateParams& p, double x) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "density_q1 needs |rho| < 1");
  }
  return density_q1(p, x, quadrant_probs(p));
}

double density_q1(const BivariateParams& p, double x, const QuadrantProbs& probs) {
  require_mass(probs.q1, "Q1");
  if (!(x > 0.0)) return 0.0;
  return half_plane_joint_density(p, x) / probs.q1;
}

double log_density_q1(const BivariateParams& p, double x) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "log_density_q1 needs |rho| < 1");
  }
  return log_density_q1(p, x, quadrant_probs(p));
}

double log_density_q1(const BivariateParams& p, double x, const QuadrantProbs& probs) {
  require_mass(probs.q1, "Q1");
  if (!(x > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "log_density_q1 requires x > 0");
  }
  return log_half_plane_joint_density(p, x) - std::log(probs.q1);
}

double quadrant_joint_density(const BivariateParams& p, Quadrant q, double x,
                              const Tolerances& tol) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "quadrant densities need |rho| < 1");
  }
  switch (q) {
    case Quadrant::Q1: return x > 0.0 ? half_plane_joint_density(p, x) : 0.0;
    case Quadrant::Q3: return x > 0.0 ? half_plane_joint_density(p.negated_means(), x) : 0.0;
    case Quadrant::Q2: return x < 0.0 ? slice_integral(p, x, true, tol.slice_rel) : 0.0;
    case Quadrant::Q4: return x < 0.0 ? slice_integral(p, x, false, tol.slice_rel) : 0.0;
  }
  return 0.0;
}

double density_quadrant(const BivariateParams& p, Quadrant q, double x, const Tolerances& tol) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "quadrant densities need |rho| < 1");
  }
  return density_quadrant(p, q, x, quadrant_probs(p, tol), tol);
}

double density_quadrant(const BivariateParams& p, Quadrant q, double x,
                        const QuadrantProbs& probs, const Tolerances& tol) {
  const double mass = require_mass(probs.of(q), quadrant_name(q));
  return quadrant_joint_density(p, q, x, tol) / mass;
}

double density_half_plane(const BivariateParams& p, HalfPlane half, double x) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "half-plane densities need |rho| < 1");
  }
  return density_half_plane(p, half, x, quadrant_probs(p));
}

double density_half_plane(const BivariateParams& p, HalfPlane half, double x,
                          const QuadrantProbs& probs) {
  const bool top = half == HalfPlane::Top;
  const double mass = require_mass(probs.of(half), top ? "H_T" : "H_B");
  const double joint = top ? half_plane_joint_density(p, x)
                           : half_plane_joint_density(p.negated_means(), x);
  return joint / mass;
}

double density_unconditional(const BivariateParams& p, double x) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "use density_singular for rho = -1");
  }
  const double value = half_plane_joint_density(p, x) +
                       half_plane_joint_density(p.negated_means(), x);
  return value < std::numeric_limits<double>::min() ? 0.0 : value;
}

namespace {

void require_singular(const BivariateParams& p) {
  if (!p.is_singular()) {
    throw Error(ErrorCode::KindMismatch, "closed form applies to rho = -1 only");
  }
  if (!(p.mu1() > 0.0) || !(p.mu2() > 0.0)) {
    throw Error(ErrorCode::InvalidSingularParams,
                "rho = -1 closed form needs mu1, mu2, sigma1, sigma2 > 0");
  }
}

}  // namespace

double density_singular(const BivariateParams& p, double x) {
  require_singular(p);
  const double den = p.sigma2() * x + p.sigma1();
  if (den == 0.0) return 0.0;
  const double y = (p.mu2() * x - p.mu1()) / den;
  const double scale = p.mu1() * p.sigma2() + p.mu2() * p.sigma1();
  return scale * phi(y) / (den * den);
}

double cdf_singular(const BivariateParams& p, double x) {
  require_singular(p);
  const double den = p.sigma2() * x + p.sigma1();
  const double top = p.mu2() / p.sigma2();  // X2 > 0 <=> Y < top
  if (den == 0.0) return cap_phi(-top);
  const double y = (p.mu2() * x - p.mu1()) / den;
  double value = 0.0;
  if (den > 0.0) {
    // {R <= x} = {Y <= y} u {Y > top}, with y < top.
    value = cap_phi(y) + cap_phi(-top);
  } else {
    // {R <= x} = {top < Y <= y}.
    value = cap_phi(-top) - cap_phi(-y);
  }
  return std::clamp(value, 0.0, 1.0);
}

double density_const_denominator(const BivariateParams& p, double x) {
  if (!(p.mu2() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "constant-denominator limit needs mu2 > 0");
  }
  const double z = (x * p.mu2() - p.mu1()) / p.sigma1();
  return p.mu2() / p.sigma1() * phi(z);
}

double const_denominator_error_bound(const BivariateParams& p, double m_bound) {
  if (!(p.mu2() > 0.0) || !(m_bound > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "error bound needs mu2 > 0 and M > 0");
  }
  const double s1 = p.sigma1();
  const double s2 = p.sigma2();
  const double first = std::sqrt(s2) / (2.0 * kPi * s1) *
                       (std::sqrt(kPi) * std::pow(2.0, 1.5) / 4.0) * m_bound;
  const double second = s2 / (2.0 * kPi * s1) / std::sqrt(kPi) * (2.0 / p.mu2()) *
                        std::exp(-std::pow(2.0 * s2 * s2, 1.5) * p.mu2());
  return first + second;
}

double cauchy_reference(double x, bool conditioned_positive) {
  if (conditioned_positive) {
    return x < 0.0 ? 0.0 : (2.0 / kPi) / (1.0 + x * x);
  }
  return 1.0 / (kPi * (1.0 + x * x));
}

DensityEvaluator::DensityEvaluator(const BivariateParams& params, DensityKind kind,
                                   const Tolerances& tol)
    : params_(params), kind_(kind), tol_(tol) {
  const bool wants_singular = kind == DensityKind::SingularRhoMinus1;
  const bool agnostic =
      kind == DensityKind::CauchyReference || kind == DensityKind::ConstDenomApprox;
  if (wants_singular && !params.is_singular()) {
    throw Error(ErrorCode::KindMismatch, "singular kind requested for |rho| < 1");
  }
  if (!agnostic && !wants_singular && params.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "rho = -1 parameters need the singular kind");
  }
  switch (kind) {
    case DensityKind::Q1:
    case DensityKind::Q2:
    case DensityKind::Q3:
    case DensityKind::Q4: {
      probs_ = quadrant_probs(params, tol);
      const auto q = static_cast<Quadrant>(static_cast<int>(kind) - static_cast<int>(DensityKind::Q1));
      mass_ = require_mass(probs_.of(q), quadrant_name(q));
      break;
    }
    case DensityKind::HalfTop:
      probs_ = quadrant_probs(params, tol);
      mass_ = require_mass(probs_.h_top, "H_T");
      break;
    case DensityKind::HalfBottom:
      probs_ = quadrant_probs(params, tol);
      mass_ = require_mass(probs_.h_bottom, "H_B");
      break;
    case DensityKind::SingularRhoMinus1:
      require_singular(params);
      break;
    case DensityKind::ConstDenomApprox:
      if (!(params.mu2() > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "constant-denominator limit needs mu2 > 0");
      }
      break;
    case DensityKind::Unconditional:
    case DensityKind::CauchyReference:
      break;
  }
}

double DensityEvaluator::operator()(double x) const {
  switch (kind_) {
    case DensityKind::Q1: return quadrant_joint_density(params_, Quadrant::Q1, x, tol_) / mass_;
    case DensityKind::Q2: return quadrant_joint_density(params_, Quadrant::Q2, x, tol_) / mass_;
    case DensityKind::Q3: return quadrant_joint_density(params_, Quadrant::Q3, x, tol_) / mass_;
    case DensityKind::Q4: return quadrant_joint_density(params_, Quadrant::Q4, x, tol_) / mass_;
    case DensityKind::HalfTop: return half_plane_joint_density(params_, x) / mass_;
    case DensityKind::HalfBottom:
      return half_plane_joint_density(params_.negated_means(), x) / mass_;
    case DensityKind::Unconditional: return density_unconditional(params_, x);
    case DensityKind::SingularRhoMinus1: return density_singular(params_, x);
    case DensityKind::CauchyReference: return cauchy_reference(x, true);
    case DensityKind::ConstDenomApprox: return density_const_denominator(params_, x);
  }
  return 0.0;
}

Support support_of(DensityKind kind) noexcept {
  switch (kind) {
    case DensityKind::Q1:
    case DensityKind::Q3:
    case DensityKind::CauchyReference: return {false, true};
    case DensityKind::Q2:
    case DensityKind::Q4: return {true, false};
    default: return {true, true};
  }
}

std::vector<double> make_grid(double x_min, double x_max, std::size_t n_points,
                              GridSpacing spacing) {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorCode::InvalidArgument, "grid needs finite x_min < x_max");
  }
  if (n_points < 2) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points");
  }
  if (spacing == GridSpacing::Log && !(x_min > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "log spacing needs x_min > 0");
  }
  std::vector<double> xs(n_points);
  const double last = static_cast<double>(n_points - 1);
  const double l0 = spacing == GridSpacing::Log ? std::log(x_min) : x_min;
  const double l1 = spacing == GridSpacing::Log ? std::log(x_max) : x_max;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double u = std::lerp(l0, l1, static_cast<double>(i) / last);
    xs[i] = spacing == GridSpacing::Log ? std::exp(u) : u;
  }
  xs.front() = x_min;
  xs.back() = x_max;
  for (std::size_t i = 1; i < n_points; ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "grid is not strictly increasing at this resolution");
    }
  }
  return xs;
}

DensityCurve sample_curve(const BivariateParams& params, DensityKind kind, double x_min,
                          double x_max, std::size_t n_points, GridSpacing spacing,
                          const Tolerances& tol) {
  std::vector<double> xs = make_grid(x_min, x_max, n_points, spacing);
  const DensityEvaluator eval(params, kind, tol);
  DensityCurve curve{std::move(xs), std::vector<double>(n_points), kind, params};
  parallel_for(n_points, [&](std::size_t i) { curve.values[i] = eval(curve.xs[i]); });
  return curve;
}

}  // namespace ratnorm
