#include "ratnorm/params.hpp"

#include <cmath>
#include <sstream>

#include "ratnorm/error.hpp"

namespace ratnorm {

BivariateParams BivariateParams::validate(double mu1, double mu2, double sigma1, double sigma2,
                                          double rho) {
  if (!std::isfinite(mu1) || !std::isfinite(mu2)) {
    throw Error(ErrorCode::InvalidArgument, "means must be finite");
  }
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2)) {
    std::ostringstream os;
    os << "standard deviations must be positive and finite (sigma1=" << sigma1
       << ", sigma2=" << sigma2 << ")";
    throw Error(ErrorCode::NonPositiveSigma, os.str());
  }
  if (!(rho >= -1.0) || !(rho < 1.0)) {
    std::ostringstream os;
    os << "correlation must lie in [-1, 1), got " << rho;
    throw Error(ErrorCode::CorrelationOutOfRange, os.str());
  }
  if (rho != -1.0 && 1.0 - std::abs(rho) < kSingularCorrelationBand) {
    std::ostringstream os;
    os << "correlation " << rho << " is numerically singular; use exactly -1 for the "
       << "singular case";
    throw Error(ErrorCode::CorrelationOutOfRange, os.str());
  }
  return {mu1, mu2, sigma1, sigma2, rho};
}

BivariateParams BivariateParams::negated_means() const noexcept {
  return {-mu1_, -mu2_, sigma1_, sigma2_, rho_};
}

BivariateParams BivariateParams::reflected_numerator() const {
  if (is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "reflection of a singular pair flips rho to +1");
  }
  return {-mu1_, mu2_, sigma1_, sigma2_, -rho_};
}

BivariateParams BivariateParams::reflected_denominator() const {
  if (is_singular()) {
    throw Error(ErrorCode::SingularCorrelation, "reflection of a singular pair flips rho to +1");
  }
  return {mu1_, -mu2_, sigma1_, sigma2_, -rho_};
}

QuadraticCoeffs coeffs_at(const BivariateParams& p, double x) {
  if (p.is_singular()) {
    throw Error(ErrorCode::SingularCorrelation,
                "quadratic coefficients are undefined for rho = -1; use density_singular");
  }
  const double s1 = p.sigma1();
  const double s2 = p.sigma2();
  const double rho = p.rho();
  const double one_m_rho2 = 1.0 - rho * rho;
  const double shift = x - rho * s1 / s2;
  const double z1 = p.mu1() / s1;
  const double z2 = p.mu2() / s2;
  const double tilt = rho * z2 - z1;  // rho mu2/sigma2 - mu1/sigma1

  QuadraticCoeffs c{};
  c.a_of_x = 1.0 / (s2 * s2) + shift * shift / (s1 * s1 * one_m_rho2);
  c.b_of_x =
      -p.mu2() / (s2 * s2) + shift * (p.mu2() * rho * s1 / s2 - p.mu1()) / (s1 * s1 * one_m_rho2);
  c.c_const = z2 * z2 + tilt * tilt / one_m_rho2;
  c.omega = c.b_of_x / std::sqrt(2.0 * c.a_of_x);
  c.omega0 = tilt / std::sqrt(2.0 * one_m_rho2);
  c.a1 = tilt * (s2 / s1) / one_m_rho2;
  c.b1 = -z2;
  c.a2sq = (s2 / s1) * (s2 / s1) / one_m_rho2;
  return c;
}

double quadratic_minimum(const BivariateParams& p, const QuadraticCoeffs& c, double x) {
  const double num = x * p.mu2() - p.mu1();
  const double s12 = p.sigma1() * p.sigma2();
  return num * num / (s12 * s12 * (1.0 - p.rho() * p.rho()) * c.a_of_x);
}

}  // namespace ratnorm
