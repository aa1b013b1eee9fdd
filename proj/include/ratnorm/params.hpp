#pragma once

namespace ratnorm {

/// Correlations with 1 - |rho| below this band (other than rho == -1
/// exactly) are rejected: 1/(1 - rho^2) would dominate every downstream
/// error budget.
inline constexpr double kSingularCorrelationBand = 1e-12;

/// Means, standard deviations and correlation of the pair (X1, X2) whose
/// quotient X1/X2 this library studies. Instances are only produced by
/// validate() and are immutable afterwards.
///
/// rho == -1 is admitted and flagged singular: the pair is then an affine
/// image of one standard normal, X1 = mu1 + sigma1*Y, X2 = mu2 - sigma2*Y.
class BivariateParams {
 public:
  static BivariateParams validate(double mu1, double mu2, double sigma1, double sigma2,
                                  double rho);

  [[nodiscard]] double mu1() const noexcept { return mu1_; }
  [[nodiscard]] double mu2() const noexcept { return mu2_; }
  [[nodiscard]] double sigma1() const noexcept { return sigma1_; }
  [[nodiscard]] double sigma2() const noexcept { return sigma2_; }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] bool is_singular() const noexcept { return rho_ == -1.0; }

  /// (mu1, mu2) -> (-mu1, -mu2): the law of (-X1, -X2).
  [[nodiscard]] BivariateParams negated_means() const noexcept;
  /// Law of (-X1, X2). Requires |rho| < 1.
  [[nodiscard]] BivariateParams reflected_numerator() const;
  /// Law of (X1, -X2). Requires |rho| < 1.
  [[nodiscard]] BivariateParams reflected_denominator() const;

  friend bool operator==(const BivariateParams&, const BivariateParams&) = default;

 private:
  BivariateParams(double mu1, double mu2, double sigma1, double sigma2, double rho) noexcept
      : mu1_(mu1), mu2_(mu2), sigma1_(sigma1), sigma2_(sigma2), rho_(rho) {}

  double mu1_;
  double mu2_;
  double sigma1_;
  double sigma2_;
  double rho_;
};

/// Coefficients of the quadratic Q(s) = A s^2 + 2 B s + C in the exponent of
/// the joint density along the ray s1 = x s2, together with the
/// x-independent constants that govern the x -> infinity limit.
struct QuadraticCoeffs {
  double a_of_x;   ///< A(x) > 0
  double b_of_x;   ///< B(x)
  double c_const;  ///< C >= 0
  double omega;    ///< B / sqrt(2A)
  double omega0;   ///< lim omega as x -> infinity
  double a1;
  double b1;
  double a2sq;
};

/// Throws SingularCorrelation for rho == -1.
QuadraticCoeffs coeffs_at(const BivariateParams& params, double x);

/// C - B^2/A, the minimum of Q(s). Closed form free of cancellation:
/// (x mu2 - mu1)^2 / (sigma1^2 sigma2^2 (1 - rho^2) A).
double quadratic_minimum(const BivariateParams& params, const QuadraticCoeffs& coeffs, double x);

}  // namespace ratnorm
