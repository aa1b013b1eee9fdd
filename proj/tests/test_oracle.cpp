#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "ratnorm/density.hpp"
#include "ratnorm/error.hpp"
#include "ratnorm/numeric_cdf.hpp"
#include "ratnorm/oracle.hpp"
#include "ratnorm/quadprob.hpp"
#include "support/oracles.hpp"

using doctest::Approx;
using ratnorm::BivariateParams;
using ratnorm::Conditioning;
using ratnorm::ErrorCode;
using ratnorm::Quadrant;

namespace {

constexpr double kPi = std::numbers::pi;

BivariateParams bp(double mu1, double mu2, double s1, double s2, double rho) {
  return BivariateParams::validate(mu1, mu2, s1, s2, rho);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const ratnorm::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

double frequency(const ratnorm::SampleBatch& b, Quadrant q) {
  return static_cast<double>(b.quadrant_counts[static_cast<int>(q)]) / static_cast<double>(b.n);
}

Conditioning conditioning_of(Quadrant q) {
  switch (q) {
    case Quadrant::Q1: return Conditioning::Q1;
    case Quadrant::Q2: return Conditioning::Q2;
    case Quadrant::Q3: return Conditioning::Q3;
    case Quadrant::Q4: return Conditioning::Q4;
  }
  return Conditioning::None;
}

struct ThreadEnv {
  explicit ThreadEnv(const char* value) { ::setenv("RATIO_NORMAL_THREADS", value, 1); }
  ~ThreadEnv() { ::unsetenv("RATIO_NORMAL_THREADS"); }
};

}  // namespace

TEST_CASE("quadrant classification") {
  CHECK(ratnorm::quadrant_of(1, 1) == Quadrant::Q1);
  CHECK(ratnorm::quadrant_of(-1, 1) == Quadrant::Q2);
  CHECK(ratnorm::quadrant_of(-1, -1) == Quadrant::Q3);
  CHECK(ratnorm::quadrant_of(1, -1) == Quadrant::Q4);
}

TEST_CASE("symmetric sampling fills each quadrant equally") {
  const auto b = ratnorm::sample_bivariate(bp(0, 0, 1, 1, 0), 1'000'000, 5);
  CHECK(b.n == 1'000'000);
  CHECK(b.ratios.size() == b.n);
  CHECK(b.quadrants.size() == b.n);
  std::size_t total = 0;
  for (auto c : b.quadrant_counts) total += c;
  CHECK(total == b.n);
  for (Quadrant q : {Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4}) {
    CHECK(std::abs(frequency(b, q) - 0.25) <= 0.002);
  }
}

TEST_CASE("singular sampling is perfectly anticorrelated") {
  const auto pairs = ratnorm::sample_pairs(bp(1, 1, 1, 1, -1), 1'000'000, 6);
  double m1 = 0, m2 = 0;
  for (const auto& p : pairs) {
    m1 += p.x1;
    m2 += p.x2;
  }
  const double n = static_cast<double>(pairs.size());
  m1 /= n;
  m2 /= n;
  double c11 = 0, c22 = 0, c12 = 0;
  for (const auto& p : pairs) {
    c11 += (p.x1 - m1) * (p.x1 - m1);
    c22 += (p.x2 - m2) * (p.x2 - m2);
    c12 += (p.x1 - m1) * (p.x2 - m2);
  }
  CHECK(c12 / std::sqrt(c11 * c22) <= -0.999);
}

TEST_CASE("sampling is deterministic and independent of worker count") {
  const auto p = bp(1, 2, 3, 4, 0.5);
  const std::size_t n = 3 * ratnorm::kSampleChunk + 17;
  ratnorm::SampleBatch one, many;
  {
    ThreadEnv env("1");
    one = ratnorm::sample_bivariate(p, n, 77);
  }
  {
    ThreadEnv env("4");
    many = ratnorm::sample_bivariate(p, n, 77);
  }
  const auto again = ratnorm::sample_bivariate(p, n, 77);
  CHECK(one.ratios == many.ratios);
  CHECK(one.ratios == again.ratios);
  CHECK(one.quadrants == many.quadrants);
  CHECK(one.quadrant_counts == many.quadrant_counts);
  CHECK(one.seed == 77);

  const auto other = ratnorm::sample_bivariate(p, n, 78);
  CHECK(other.ratios != one.ratios);

  // Whole chunks do not depend on how many follow them.
  const auto shorter = ratnorm::sample_bivariate(p, ratnorm::kSampleChunk, 77);
  CHECK(std::equal(shorter.ratios.begin(), shorter.ratios.end(), one.ratios.begin()));

  const auto pairs = ratnorm::sample_pairs(p, n, 77);
  REQUIRE(pairs.size() == n);
  for (std::size_t i = 0; i < n; i += 997) CHECK(pairs[i].x1 / pairs[i].x2 == one.ratios[i]);
}

TEST_CASE("quadrant frequencies match the quadrant probabilities") {
  oracle::Uniform u(51);
  constexpr std::size_t n = 1'000'000;
  for (int i = 0; i < 20; ++i) {
    const auto p = oracle::random_params(u, -2, 2, 0.2, 2, 0.9);
    const auto probs = ratnorm::quadrant_probs(p);
    const auto b = ratnorm::sample_bivariate(p, n, 500 + i);
    for (Quadrant q : {Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4}) {
      const double want = probs.of(q);
      const double se = std::sqrt(want * (1 - want) / static_cast<double>(n));
      CHECK(std::abs(frequency(b, q) - want) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("KS statistic") {
  oracle::Uniform u(52);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = u(0.0, 1.0);
  const auto r = ratnorm::ks_test(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(r.n_effective == xs.size());
  CHECK(r.ks_threshold_95 == Approx(1.358 / std::sqrt(20000.0)).epsilon(1e-15));
  CHECK(r.passed == (r.ks_statistic <= r.ks_threshold_95));
  CHECK(r.passed);

  // One point at the median: the gap is exactly one half.
  const auto half =
      ratnorm::ks_test(std::vector<double>(100, 0.5), [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(half.ks_statistic == Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(half.passed);

  CHECK(code_of([] { (void)ratnorm::ks_test(std::vector<double>(99, 0.5), [](double) { return 0.5; }); }) ==
        ErrorCode::InsufficientSamples);
}

TEST_CASE("KS against the one-sided Cauchy law") {
  const auto c = bp(1e-9, 1e-9, 1, 1, 0);
  const auto b = ratnorm::sample_bivariate(c, 100'000, 53);
  const auto r = ratnorm::ks_against_numeric(
      b, [](double x) { return x <= 0 ? 0.0 : (2.0 / kPi) * std::atan(x); }, Conditioning::Q1);
  CHECK(r.n_effective == b.quadrant_counts[0]);
  CHECK(r.passed);
  const auto numeric = ratnorm::ks_against_numeric(b, ratnorm::ratio_cdf(c, Conditioning::Q1),
                                                   Conditioning::Q1);
  CHECK(numeric.passed);
}

TEST_CASE("KS against the singular closed form and a wrong reference") {
  const auto s = bp(1, 2, 0.5, 0.7, -1);
  const auto b = ratnorm::sample_bivariate(s, 1'000'000, 54);
  CHECK(ratnorm::ks_against_numeric(b, ratnorm::ratio_cdf(s, Conditioning::None), Conditioning::None)
            .passed);
  const auto swapped = bp(2, 1, 0.5, 0.7, -1);
  CHECK_FALSE(ratnorm::ks_against_numeric(b, ratnorm::ratio_cdf(swapped, Conditioning::None),
                                          Conditioning::None)
                  .passed);

  const auto p = bp(1, 2, 3, 4, 0.5);
  const auto bp_batch = ratnorm::sample_bivariate(p, 200'000, 55);
  CHECK_FALSE(ratnorm::ks_against_numeric(bp_batch,
                                          ratnorm::ratio_cdf(bp(2, 1, 3, 4, 0.5), Conditioning::Q1),
                                          Conditioning::Q1)
                  .passed);

  CHECK(code_of([&] { (void)ratnorm::ratio_cdf(s, Conditioning::Q1); }) == ErrorCode::KindMismatch);
}

TEST_CASE("conditioned KS tests on random parameters") {
  oracle::Uniform u(56);
  constexpr std::size_t n = 200'000;
  int failures = 0;
  int rerun_failures = 0;
  for (int i = 0; i < 10; ++i) {
    const auto p = oracle::random_params(u, -1.5, 1.5, 0.3, 2, 0.9);
    const auto probs = ratnorm::quadrant_probs(p);
    const auto batch = ratnorm::sample_bivariate(p, n, 600 + i);
    for (Quadrant q : {Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4}) {
      if (probs.of(q) * n < 2000) continue;
      const auto cdf = ratnorm::ratio_cdf(p, conditioning_of(q));
      const auto first = ratnorm::ks_against_numeric(batch, cdf, conditioning_of(q));
      if (first.passed) continue;
      MESSAGE("set " << i << " quadrant " << static_cast<int>(q) + 1 << ": D = " << first.ks_statistic
                     << ", threshold " << first.ks_threshold_95);
      ++failures;
      const auto second = ratnorm::sample_bivariate(p, n, 700 + i);
      if (!ratnorm::ks_against_numeric(second, cdf, conditioning_of(q)).passed) ++rerun_failures;
    }
  }
  // About 40 tests at the 5% level: first-round failures are expected, and a
  // genuine defect is one that persists under a fresh seed.
  MESSAGE(failures << " first-seed KS failures");
  CHECK(rerun_failures == 0);
}

TEST_CASE("KS needs enough conditioned samples") {
  const auto p = bp(3, 3, 1, 1, 0);
  const auto b = ratnorm::sample_bivariate(p, 10'000, 57);
  REQUIRE(b.quadrant_counts[2] < 100);
  CHECK(code_of([&] {
          (void)ratnorm::ks_against_numeric(b, [](double) { return 0.5; }, Conditioning::Q3);
        }) == ErrorCode::InsufficientSamples);
}

TEST_CASE("density kinds behind each conditioning") {
  using ratnorm::DensityKind;
  CHECK(ratnorm::density_kind_for(Conditioning::None, false) == DensityKind::Unconditional);
  CHECK(ratnorm::density_kind_for(Conditioning::None, true) == DensityKind::SingularRhoMinus1);
  CHECK(ratnorm::density_kind_for(Conditioning::Q3, false) == DensityKind::Q3);
  CHECK(ratnorm::density_kind_for(Conditioning::HalfTop, false) == DensityKind::HalfTop);
}

TEST_CASE("tabulated CDFs") {
  ratnorm::NumericCdf::Options o;
  o.lower = 0.0;
  const ratnorm::NumericCdf cauchy([](double x) { return (2.0 / kPi) / (1.0 + x * x); }, o);
  CHECK(std::abs(cauchy.total_mass() - 1.0) <= 1e-9);
  for (double x : {1e-6, 0.01, 0.5, 1.0, 3.0, 100.0, 1e5}) {
    CHECK(std::abs(cauchy(x) - (2.0 / kPi) * std::atan(x)) <= 1e-9);
  }
  CHECK(cauchy(-1.0) == 0.0);
  CHECK(cauchy(1e300) == Approx(1.0).epsilon(1e-9));

  // Q2 conditional CDF against direct quadrature of its density.
  const auto p = bp(1, 2, 3, 4, 0.5);
  const auto cdf = ratnorm::ratio_cdf(p, Conditioning::Q2);
  const auto probs = ratnorm::quadrant_probs(p);
  auto f = [&](double x) { return ratnorm::density_quadrant(p, Quadrant::Q2, x, probs); };
  CHECK(std::abs(cdf(0.0) - 1.0) <= 1e-8);
  for (double x : {-50.0, -3.0, -1.0, -0.2}) {
    std::vector<double> breaks{x, 0.0};
    const double between = oracle::integrate_pieces(f, breaks);
    CHECK(std::abs(cdf(x) - (1.0 - between)) <= 1e-8);
  }

  double previous = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double x = -100.0 + k * 0.5;
    const double v = cdf(x);
    CHECK(v >= previous);
    previous = v;
  }
}

TEST_CASE("Hill estimator on reference laws") {
  constexpr std::size_t n = 1'000'000;
  constexpr std::size_t k = 10'000;
  oracle::Uniform u(58);
  std::vector<double> cauchy(n), normal(n), pareto(n);
  for (std::size_t i = 0; i < n; ++i) {
    cauchy[i] = std::abs(std::tan(kPi * (u(0.0, 1.0) - 0.5)));
    const double r = std::sqrt(-2.0 * std::log(1.0 - u(0.0, 1.0)));
    normal[i] = std::abs(r * std::cos(2.0 * kPi * u(0.0, 1.0)));
    pareto[i] = 1.0 / (1.0 - u(0.0, 1.0));
  }
  const double a_cauchy = ratnorm::hill_estimator(cauchy, k);
  CHECK(a_cauchy >= 0.95);
  CHECK(a_cauchy <= 1.05);
  CHECK(ratnorm::hill_estimator(normal, k) > 2.5);
  CHECK(std::abs(ratnorm::hill_estimator(pareto, k) - 1.0) <= 3.0 / std::sqrt(double(k)));

  // Exact order statistics: X_(k+1) = 1 and the top k are e^{1}, ..., so the
  // log-excess sum is k and the estimate is exactly 1.
  std::vector<double> exact(11, 1.0);
  for (int i = 0; i < 10; ++i) exact[i] = std::exp(1.0);
  CHECK(ratnorm::hill_estimator(exact, 10) == Approx(1.0).epsilon(1e-15));

  CHECK(code_of([] { (void)ratnorm::hill_estimator({1, 2, 3}, 3); }) == ErrorCode::InsufficientTail);
  CHECK(code_of([] { (void)ratnorm::hill_estimator({1, 2, 3}, 0); }) == ErrorCode::InsufficientTail);
  CHECK(code_of([] { (void)ratnorm::hill_estimator({0, 0, 0, 1}, 2); }) ==
        ErrorCode::InsufficientTail);
}

TEST_CASE("Hill estimate of quotient samples is near one") {
  for (const auto& p : {bp(1, 1, 1, 1, 0), bp(1, 2, 3, 4, 0.5), bp(1, 1, 0.5, 0.5, -0.9)}) {
    const auto b = ratnorm::sample_bivariate(p, 1'000'000, 59);
    std::vector<double> a(b.ratios.size());
    std::transform(b.ratios.begin(), b.ratios.end(), a.begin(), [](double r) { return std::abs(r); });
    const double alpha = ratnorm::hill_estimator(std::move(a), 10'000);
    CAPTURE(alpha);
    CHECK(alpha >= 0.8);
    CHECK(alpha <= 1.2);
  }
}
