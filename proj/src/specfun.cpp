#include "ratnorm/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "ratnorm/error.hpp"

namespace ratnorm {
namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;  // 1/sqrt(pi)
constexpr double kSqrtPi = 1.7724538509055160273;

// Rational Chebyshev approximations of W. J. Cody (Math. Comp. 23, 1969),
// as packaged in the netlib specfun CALERF routine. One kernel serves erf,
// erfc and exp(x^2) erfc(x).
constexpr std::array<double, 5> kA = {3.1611237438705656, 113.864154151050156,
                                      377.485237685302021, 3209.37758913846947,
                                      .185777706184603153};
constexpr std::array<double, 4> kB = {23.6012909523441209, 244.024637934444173,
                                      1282.61652607737228, 2844.23683343917062};
constexpr std::array<double, 9> kC = {.564188496988670089, 8.88314979438837594,
                                      66.1191906371416295, 298.635138197400131,
                                      881.95222124176909,  1712.04761263407058,
                                      2051.07837782607147, 1230.33935479799725,
                                      2.15311535474403846e-8};
constexpr std::array<double, 8> kD = {15.7449261107098347, 117.693950891312499,
                                      537.181101862009858, 1621.38957456669019,
                                      3290.79923573345963, 4362.61909014324716,
                                      3439.36767414372164, 1230.33935480374942};
constexpr std::array<double, 6> kP = {.305326634961232344,  .360344899949804439,
                                      .125781726111229246,  .0160837851487422766,
                                      6.58749161529837803e-4, .0163153871373020978};
constexpr std::array<double, 5> kQ = {2.56852019228982242, 1.87295284992346047,
                                      .527905102951428412, .0605183413124413191,
                                      .00233520497626869185};

constexpr double kThresh = 0.46875;
constexpr double kXSmall = 1.11e-16;
constexpr double kXBig = 26.543;
constexpr double kXHuge = 6.71e7;
constexpr double kXMax = 2.53e307;
constexpr double kXNeg = -26.628;
// erfc(x) is below the smallest subnormal beyond this.
constexpr double kErfcUnderflow = 27.3;

// 1/sqrt(2) as an unevaluated sum hi + lo.
constexpr double kInvSqrt2Hi = 0.7071067811865476;
constexpr double kInvSqrt2Lo = -4.833646656726457e-17;

enum class Mode { Erf, Erfc, Erfcx };

// exp(-y^2) with the argument split so that the product keeps full
// precision for large y.
double exp_neg_square(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

double calerf(double x, Mode mode) {
  const double y = std::abs(x);
  double result = 0.0;

  if (y <= kThresh) {
    const double ysq = y > kXSmall ? y * y : 0.0;
    double xnum = kA[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + kA[i]) * ysq;
      xden = (xden + kB[i]) * ysq;
    }
    result = x * (xnum + kA[3]) / (xden + kB[3]);
    if (mode != Mode::Erf) result = 1.0 - result;
    if (mode == Mode::Erfcx) result *= std::exp(ysq);
    return result;
  }

  if (y <= 4.0) {
    double xnum = kC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kC[i]) * y;
      xden = (xden + kD[i]) * y;
    }
    result = (xnum + kC[7]) / (xden + kD[7]);
    if (mode != Mode::Erfcx) result *= exp_neg_square(y);
  } else {
    bool done = false;
    if (mode != Mode::Erfcx) {
      if (y >= kErfcUnderflow) {
        result = 0.0;
        done = true;
      }
    } else if (y >= kXBig) {
      if (y >= kXMax) {
        result = 0.0;
        done = true;
      } else if (y >= kXHuge) {
        result = kInvSqrtPi / y;
        done = true;
      }
    }
    if (!done) {
      const double ysq = 1.0 / (y * y);
      double xnum = kP[5] * ysq;
      double xden = ysq;
      for (int i = 0; i < 4; ++i) {
        xnum = (xnum + kP[i]) * ysq;
        xden = (xden + kQ[i]) * ysq;
      }
      result = ysq * (xnum + kP[4]) / (xden + kQ[4]);
      result = (kInvSqrtPi - result) / y;
      if (mode != Mode::Erfcx) result *= exp_neg_square(y);
    }
  }

  // Reflection for negative arguments.
  switch (mode) {
    case Mode::Erf:
      result = (0.5 - result) + 0.5;
      if (x < 0.0) result = -result;
      break;
    case Mode::Erfc:
      if (x < 0.0) result = 2.0 - result;
      break;
    case Mode::Erfcx:
      if (x < 0.0) {
        if (x < kXNeg) {
          result = std::numeric_limits<double>::infinity();
        } else {
          const double e = 1.0 / exp_neg_square(x);
          result = (e + e) - result;
        }
      }
      break;
  }
  return result;
}

// 2w^2 h(w) = sum_{n>=1} (-1)^{n+1} (2n-1)!! / (2w^2)^{n-1}, summed up to
// the smallest term.
double h_series_normalized(double omega) {
  const double u = 1.0 / (2.0 * omega * omega);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 60; ++n) {
    const double next = -term * (2.0 * n + 1.0) * u;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// w^3 h'(w) from termwise differentiation of the same series.
double h_prime_series_scaled(double omega) {
  const double u = 1.0 / (2.0 * omega * omega);
  // h = sum_n c_n u^n with c_n = (-1)^{n+1} (2n-1)!!, and d(u^n)/dw = -2n u^n / w.
  double cn = 1.0;  // c_1
  double un = u;
  double sum = -2.0 * cn * un;
  double prev = std::abs(sum);
  for (int n = 2; n < 60; ++n) {
    cn = -cn * (2.0 * n - 1.0);
    un *= u;
    const double term = -2.0 * n * cn * un;
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  // sum is w h'(w); scale by w^2.
  return sum * omega * omega;
}

}  // namespace

double phi(double z) noexcept {
  return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double cap_phi(double z) noexcept {
  // Phi(z) = erfc(t)/2 with t = -z/sqrt(2). t is carried as x + dx and the
  // rounding dx is folded back in through erfc(x + dx) ~ erfc(x)(1 - 2 x dx),
  // which matters in the far lower tail where erfc amplifies argument error.
  const double x = -z * kInvSqrt2Hi;
  const double dx = std::fma(-z, kInvSqrt2Hi, -x) - z * kInvSqrt2Lo;
  const double base = erfc(x);
  if (x < 1.0) return 0.5 * base;
  return 0.5 * base * (1.0 - 2.0 * x * dx);
}

double erf(double x) noexcept { return calerf(x, Mode::Erf); }
double erfc(double x) noexcept { return calerf(x, Mode::Erfc); }
double erfc_scaled(double w) noexcept { return calerf(w, Mode::Erfcx); }

double h(double omega) {
  if (omega > kHAsymptoticSwitch) {
    return h_series_normalized(omega) / (2.0 * omega * omega);
  }
  const double value = 1.0 - kSqrtPi * omega * erfc_scaled(omega);
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::Overflow, "h(omega) exceeds the double range; use log_h");
  }
  return value;
}

double log_h(double omega) noexcept {
  if (omega > kHAsymptoticSwitch) {
    return std::log(h_series_normalized(omega)) - std::numbers::ln2 - 2.0 * std::log(omega);
  }
  if (omega < -1.0) {
    // h(-a) = 2 sqrt(pi) a exp(a^2) + h(a).
    const double a = -omega;
    const double lead = 2.0 * kSqrtPi * a;
    return a * a + std::log(lead) + std::log1p(h(a) * std::exp(-a * a) / lead);
  }
  return std::log(1.0 - kSqrtPi * omega * erfc_scaled(omega));
}

double h_damped(double omega) noexcept {
  if (omega < 0.0) {
    const double a = -omega;
    return 2.0 * kSqrtPi * a + std::exp(-a * a) * h(a);
  }
  return std::exp(-omega * omega) * h(omega);
}

double log_h_damped(double omega) noexcept {
  if (omega < 0.0) return std::log(h_damped(omega));
  return log_h(omega) - omega * omega;
}

double h_prime(double omega) noexcept {
  if (omega > kHAsymptoticSwitch) {
    return h_prime_series_scaled(omega) / (omega * omega * omega);
  }
  return 2.0 * omega - kSqrtPi * (1.0 + 2.0 * omega * omega) * erfc_scaled(omega);
}

HBounds h_bounds(double omega) {
  if (!(omega > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "h_bounds requires omega > 0");
  }
  // 1 - 2/(1 + sqrt(1 + c)) rewritten as c / (1 + sqrt(1 + c))^2.
  auto bracket = [](double c) {
    const double d = 1.0 + std::sqrt(1.0 + c);
    return c / (d * d);
  };
  const double w2 = omega * omega;
  return {bracket(4.0 / (std::numbers::pi * w2)), bracket(2.0 / w2)};
}

HBounds h_prime_bounds(double omega) {
  if (!(omega >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "h_prime_bounds requires omega >= 0");
  }
  // 2w - 2(1 + 2w^2)/(w + s), s = sqrt(w^2 + c), rewritten as
  // 2 (w (c - 2) - c/(s + w)) / (s + w)^2 to avoid cancellation.
  auto bracket = [omega](double c) {
    const double t = omega + std::sqrt(omega * omega + c);
    return 2.0 * (omega * (c - 2.0) - c / t) / (t * t);
  };
  return {bracket(4.0 / std::numbers::pi), bracket(2.0)};
}

}  // namespace ratnorm
