#include <doctest.h>

#include <cmath>
#include <limits>

#include "ratnorm/error.hpp"
#include "ratnorm/params.hpp"
#include "support/oracles.hpp"

using ratnorm::BivariateParams;
using ratnorm::Error;
using ratnorm::ErrorCode;

namespace {

ErrorCode code_of(double mu1, double mu2, double s1, double s2, double rho) {
  try {
    (void)BivariateParams::validate(mu1, mu2, s1, s2, rho);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validation to throw");
  return ErrorCode::InvalidArgument;
}

// Exponent of the bivariate density along x1 = x s, x2 = s, evaluated from
// the inverse covariance matrix.
double ray_quadratic(const BivariateParams& p, double x, double s) {
  const double d1 = (x * s - p.mu1()) / p.sigma1();
  const double d2 = (s - p.mu2()) / p.sigma2();
  return (d1 * d1 - 2.0 * p.rho() * d1 * d2 + d2 * d2) / (1.0 - p.rho() * p.rho());
}

}  // namespace

TEST_CASE("validation rejects bad parameters") {
  CHECK(code_of(0, 0, 0, 1, 0) == ErrorCode::NonPositiveSigma);
  CHECK(code_of(0, 0, 1, -2, 0) == ErrorCode::NonPositiveSigma);
  CHECK(code_of(0, 0, std::nan(""), 1, 0) == ErrorCode::NonPositiveSigma);
  CHECK(code_of(0, 0, 1, 1, 1.0) == ErrorCode::CorrelationOutOfRange);
  CHECK(code_of(0, 0, 1, 1, -1.5) == ErrorCode::CorrelationOutOfRange);
  CHECK(code_of(0, 0, 1, 1, 1.0 - 1e-13) == ErrorCode::CorrelationOutOfRange);
  CHECK(code_of(0, 0, 1, 1, -1.0 + 1e-13) == ErrorCode::CorrelationOutOfRange);
  CHECK(code_of(std::numeric_limits<double>::infinity(), 0, 1, 1, 0) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("rho = -1 is admitted as the singular case") {
  const auto p = BivariateParams::validate(1, 2, 3, 4, -1.0);
  CHECK(p.is_singular());
  CHECK_FALSE(BivariateParams::validate(1, 2, 3, 4, -0.999).is_singular());
  CHECK_THROWS_AS((void)ratnorm::coeffs_at(p, 1.0), Error);
  CHECK_THROWS_AS((void)p.reflected_numerator(), Error);
}

TEST_CASE("reflections act on means and correlation") {
  const auto p = BivariateParams::validate(1, 2, 3, 4, 0.5);
  CHECK(p.negated_means() == BivariateParams::validate(-1, -2, 3, 4, 0.5));
  CHECK(p.reflected_numerator() == BivariateParams::validate(-1, 2, 3, 4, -0.5));
  CHECK(p.reflected_denominator() == BivariateParams::validate(1, -2, 3, 4, -0.5));
}

TEST_CASE("quadratic coefficients reproduce the ray exponent") {
  oracle::Uniform u(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = oracle::random_params(u, -3, 3, 0.1, 3, 0.95);
    const double x = u(-20, 20);
    const auto c = ratnorm::coeffs_at(p, x);
    for (double s : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
      const double direct = ray_quadratic(p, x, s);
      const double poly = c.a_of_x * s * s + 2.0 * c.b_of_x * s + c.c_const;
      CHECK(poly == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
    }
    const double s_star = -c.b_of_x / c.a_of_x;
    CHECK(ratnorm::quadratic_minimum(p, c, x) ==
          doctest::Approx(ray_quadratic(p, x, s_star)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("large-x constants") {
  oracle::Uniform u(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_params(u, -3, 3, 0.1, 3, 0.95);
    const double shift_base = p.rho() * p.sigma1() / p.sigma2();
    for (double x : {-7.0, 0.5, 3.0, 40.0}) {
      const auto c = ratnorm::coeffs_at(p, x);
      const double shift = x - shift_base;
      const double s2 = p.sigma2();
      CHECK(c.a_of_x * s2 * s2 - 1.0 ==
            doctest::Approx(c.a2sq * shift * shift).epsilon(1e-10).scale(1e-12));
      CHECK(c.b_of_x * s2 == doctest::Approx(c.b1 + c.a1 * shift).epsilon(1e-10).scale(1e-12));
    }
    const auto far = ratnorm::coeffs_at(p, 1e9);
    CHECK(far.omega == doctest::Approx(far.omega0).epsilon(1e-6).scale(1e-6));
    // -C/2 = -mu2^2/(2 sigma2^2) - omega0^2
    const double z2 = p.mu2() / p.sigma2();
    CHECK(far.c_const == doctest::Approx(z2 * z2 + 2.0 * far.omega0 * far.omega0));
  }
}

TEST_CASE("error messages carry the code name") {
  try {
    (void)BivariateParams::validate(0, 0, -1, 1, 0);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("NonPositiveSigma", 0) == 0);
  }
}
