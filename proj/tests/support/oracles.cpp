#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

double mp_erfc(double x) { return static_cast<double>(boost::math::erfc(mp(x))); }

double mp_erfcx(double x) {
  const mp v(x);
  return static_cast<double>(exp(v * v) * boost::math::erfc(v));
}

double mp_cap_phi(double z) {
  const mp v(z);
  return static_cast<double>(boost::math::erfc(-v / sqrt(mp(2))) / 2);
}

double mp_h(double omega) {
  const mp w(omega);
  const mp sqrt_pi = sqrt(boost::math::constants::pi<mp>());
  return static_cast<double>(1 - sqrt_pi * w * exp(w * w) * boost::math::erfc(w));
}

double mp_log_h(double omega) {
  const mp w(omega);
  const mp sqrt_pi = sqrt(boost::math::constants::pi<mp>());
  return static_cast<double>(log(1 - sqrt_pi * w * exp(w * w) * boost::math::erfc(w)));
}

double bvn_pdf(const ratnorm::BivariateParams& p, double x1, double x2) {
  const double s11 = p.sigma1() * p.sigma1();
  const double s22 = p.sigma2() * p.sigma2();
  const double s12 = p.rho() * p.sigma1() * p.sigma2();
  const double det = s11 * s22 - s12 * s12;
  const double d1 = x1 - p.mu1();
  const double d2 = x2 - p.mu2();
  const double quad = (s22 * d1 * d1 - 2.0 * s12 * d1 * d2 + s11 * d2 * d2) / det;
  return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
}

double half_line_slice(const ratnorm::BivariateParams& p, double x, bool positive_s) {
  boost::math::quadrature::exp_sinh<double> es;
  const double sign = positive_s ? 1.0 : -1.0;
  auto f = [&](double t) { return t * bvn_pdf(p, sign * x * t, sign * t); };
  return es.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
}

double box_probability(const ratnorm::BivariateParams& p, double a1, double b1, double a2,
                       double b2) {
  using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto clip = [](double v, double mu, double s) {
    return std::clamp(v, mu - 12.0 * s, mu + 12.0 * s);
  };
  a1 = clip(a1, p.mu1(), p.sigma1());
  b1 = clip(b1, p.mu1(), p.sigma1());
  a2 = clip(a2, p.mu2(), p.sigma2());
  b2 = clip(b2, p.mu2(), p.sigma2());
  if (!(b1 > a1) || !(b2 > a2)) return 0.0;
  auto inner = [&](double x1) {
    auto g = [&](double x2) { return bvn_pdf(p, x1, x2); };
    return gk::integrate(g, a2, b2, 15, 1e-13);
  };
  return gk::integrate(inner, a1, b1, 15, 1e-12);
}

ratnorm::BivariateParams random_params(Uniform& u, double mu_lo, double mu_hi, double s_lo,
                                       double s_hi, double rho_max) {
  const double mu1 = u(mu_lo, mu_hi);
  const double mu2 = u(mu_lo, mu_hi);
  const double s1 = u(s_lo, s_hi);
  const double s2 = u(s_lo, s_hi);
  const double rho = u(-rho_max, rho_max);
  return ratnorm::BivariateParams::validate(mu1, mu2, s1, s2, rho);
}

Histogram mc_histogram(const ratnorm::BivariateParams& p, Region region, double x, double width,
                       std::size_t n, std::uint64_t seed) {
  Uniform u(seed);
  const double lo = x - 0.5 * width;
  const double hi = x + 0.5 * width;
  const double spread = p.is_singular() ? 0.0 : std::sqrt(1.0 - p.rho() * p.rho());
  std::size_t kept = 0;
  std::size_t in_bin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Box-Muller pair.
    double u1 = u(0.0, 1.0);
    while (u1 <= 0.0) u1 = u(0.0, 1.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u(0.0, 1.0);
    const double z1 = r * std::cos(t);
    const double z2 = r * std::sin(t);
    const double x1 = p.mu1() + p.sigma1() * z1;
    const double x2 = p.is_singular() ? p.mu2() - p.sigma2() * z1
                                      : p.mu2() + p.sigma2() * (p.rho() * z1 + spread * z2);
    bool keep = true;
    switch (region) {
      case Region::All: break;
      case Region::Q1: keep = x1 > 0 && x2 > 0; break;
      case Region::Q2: keep = x1 < 0 && x2 > 0; break;
      case Region::Q3: keep = x1 < 0 && x2 < 0; break;
      case Region::Q4: keep = x1 > 0 && x2 < 0; break;
    }
    if (!keep) continue;
    ++kept;
    const double q = x1 / x2;
    if (q >= lo && q < hi) ++in_bin;
  }
  const double frac = static_cast<double>(in_bin) / static_cast<double>(kept);
  const double se = std::sqrt(frac * (1.0 - frac) / static_cast<double>(kept));
  return {frac / width, se / width, kept};
}

}  // namespace oracle
