#include "ratnorm/numeric_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ratnorm/error.hpp"

namespace ratnorm {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kEndNudge = 1e-10;
constexpr int kMaxDepth = 30;
// Keeps evaluations strictly inside a finite support boundary, where a
// conditional density is defined only as a one-sided limit.
constexpr double kBoundaryInset = 1e-12;

template <class F>
double gk15(const F& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0);
}

double hermite_mid(double ga, double gb, double da, double db, double h) {
  return 0.5 * (ga + gb) + h * (da - db) / 8.0;
}

}  // namespace

NumericCdf::NumericCdf(std::function<double(double)> density, const Options& o)
    : density_(std::move(density)), centre_(o.centre), scale_(o.scale), abs_tol_(o.abs_tol) {
  if (!(o.scale > 0.0) || !(o.abs_tol > 0.0) || !(o.lower < o.upper) || o.initial_panels == 0) {
    throw Error(ErrorCode::InvalidArgument, "numeric CDF needs scale > 0, tol > 0, lower < upper");
  }
  theta_lo_ = std::isinf(o.lower) ? -kHalfPi + kEndNudge : std::atan((o.lower - centre_) / scale_);
  theta_hi_ = std::isinf(o.upper) ? kHalfPi - kEndNudge : std::atan((o.upper - centre_) / scale_);

  auto f = [this](double t) { return integrand(t); };
  const double span = theta_hi_ - theta_lo_;
  const double panel = span / static_cast<double>(o.initial_panels);
  theta_.push_back(theta_lo_);
  cumulative_.push_back(0.0);
  slope_.push_back(integrand(theta_lo_));
  for (std::size_t i = 0; i < o.initial_panels; ++i) {
    const double a = theta_lo_ + static_cast<double>(i) * panel;
    const double b = i + 1 == o.initial_panels ? theta_hi_ : a + panel;
    const double whole = gk15(f, a, b);
    refine(a, b, slope_.back(), integrand(b), whole, abs_tol_ * (b - a) / span, 0);
  }
}

double NumericCdf::integrand(double theta) const {
  theta = std::clamp(theta, theta_lo_ + kBoundaryInset, theta_hi_ - kBoundaryInset);
  const double t = std::tan(theta);
  const double x = centre_ + scale_ * t;
  const double v = density_(x) * scale_ * (1.0 + t * t);
  return std::isfinite(v) ? v : 0.0;
}

void NumericCdf::refine(double a, double b, double ga, double gb, double whole, double tol,
                        int depth) {
  auto f = [this](double t) { return integrand(t); };
  const double m = 0.5 * (a + b);
  const double left = gk15(f, a, m);
  const double right = gk15(f, m, b);
  const double g_start = cumulative_.back();
  const double predicted = hermite_mid(g_start, g_start + whole, ga, gb, b - a);
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(whole);
  const bool integral_ok = std::abs(left + right - whole) <= std::max(tol, roundoff);
  const bool interp_ok = std::abs(g_start + left - predicted) <= 0.25 * abs_tol_;
  if ((integral_ok && interp_ok) || depth >= kMaxDepth) {
    const double gm = integrand(m);
    theta_.push_back(m);
    cumulative_.push_back(g_start + left);
    slope_.push_back(gm);
    theta_.push_back(b);
    cumulative_.push_back(g_start + left + right);
    slope_.push_back(gb);
    return;
  }
  const double gm = integrand(m);
  refine(a, m, ga, gm, left, 0.5 * tol, depth + 1);
  refine(m, b, gm, gb, right, 0.5 * tol, depth + 1);
}

double NumericCdf::operator()(double x) const {
  if (std::isnan(x)) return x;
  const double theta = std::atan((x - centre_) / scale_);
  if (theta <= theta_.front()) return 0.0;
  if (theta >= theta_.back()) return std::clamp(cumulative_.back(), 0.0, 1.0);
  const auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
  const std::size_t j = static_cast<std::size_t>(it - theta_.begin());
  const std::size_t i = j - 1;
  const double h = theta_[j] - theta_[i];
  const double u = (theta - theta_[i]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  const double v = h00 * cumulative_[i] + h10 * h * slope_[i] + h01 * cumulative_[j] +
                   h11 * h * slope_[j];
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace ratnorm
