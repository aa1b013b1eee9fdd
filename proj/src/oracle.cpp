#include "ratnorm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "ratnorm/error.hpp"
#include "ratnorm/parallel.hpp"

namespace ratnorm {

PairSampler::PairSampler(const BivariateParams& params, std::uint64_t seed)
    : params_(params),
      tilt_(params.rho()),
      spread_(params.is_singular() ? 0.0 : std::sqrt(1.0 - params.rho() * params.rho())),
      engine_(seed) {}

PairSampler::Pair PairSampler::next() {
  for (;;) {
    const double z1 = normal_(engine_);
    double x1 = 0.0;
    double x2 = 0.0;
    if (params_.is_singular()) {
      x1 = params_.mu1() + params_.sigma1() * z1;
      x2 = params_.mu2() - params_.sigma2() * z1;
    } else {
      const double z2 = normal_(engine_);
      x1 = params_.mu1() + params_.sigma1() * z1;
      x2 = params_.mu2() + params_.sigma2() * (tilt_ * z1 + spread_ * z2);
    }
    if (x2 != 0.0) return {x1, x2};
  }
}

Quadrant quadrant_of(double x1, double x2) noexcept {
  if (x2 > 0.0) return x1 > 0.0 ? Quadrant::Q1 : Quadrant::Q2;
  return x1 > 0.0 ? Quadrant::Q4 : Quadrant::Q3;
}

namespace {

template <class Sink>
void generate(const BivariateParams& params, std::size_t n, std::uint64_t seed, Sink&& sink) {
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t c) {
    PairSampler sampler(params, derive_seed(seed, c));
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(n, begin + kSampleChunk);
    for (std::size_t i = begin; i < end; ++i) sink(i, sampler.next());
  });
}

}  // namespace

SampleBatch sample_bivariate(const BivariateParams& params, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
  SampleBatch batch;
  batch.n = n;
  batch.seed = seed;
  batch.ratios.resize(n);
  batch.quadrants.resize(n);
  generate(params, n, seed, [&](std::size_t i, PairSampler::Pair p) {
    batch.ratios[i] = p.x1 / p.x2;
    batch.quadrants[i] = static_cast<std::uint8_t>(quadrant_of(p.x1, p.x2));
  });
  for (std::uint8_t q : batch.quadrants) ++batch.quadrant_counts[q];
  return batch;
}

std::vector<PairSampler::Pair> sample_pairs(const BivariateParams& params, std::size_t n,
                                            std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
  std::vector<PairSampler::Pair> out(n);
  generate(params, n, seed, [&](std::size_t i, PairSampler::Pair p) { out[i] = p; });
  return out;
}

GofReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < kMinKsSamples) {
    std::ostringstream os;
    os << "KS test needs at least " << kMinKsSamples << " samples, got " << samples.size();
    throw Error(ErrorCode::InsufficientSamples, os.str());
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::vector<double> gaps(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const double f = cdf(samples[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    gaps[i] = std::max(above, below);
  });
  GofReport r{};
  r.ks_statistic = std::max(0.0, *std::max_element(gaps.begin(), gaps.end()));
  r.ks_threshold_95 = 1.358 / std::sqrt(n);
  r.n_effective = samples.size();
  r.passed = r.ks_statistic <= r.ks_threshold_95;
  return r;
}

GofReport ks_against_numeric(const SampleBatch& batch, const std::function<double(double)>& cdf,
                             Conditioning conditioning) {
  std::vector<double> kept;
  kept.reserve(batch.ratios.size());
  for (std::size_t i = 0; i < batch.ratios.size(); ++i) {
    const auto q = static_cast<Quadrant>(batch.quadrants[i]);
    bool keep = true;
    switch (conditioning) {
      case Conditioning::None: break;
      case Conditioning::Q1: keep = q == Quadrant::Q1; break;
      case Conditioning::Q2: keep = q == Quadrant::Q2; break;
      case Conditioning::Q3: keep = q == Quadrant::Q3; break;
      case Conditioning::Q4: keep = q == Quadrant::Q4; break;
      case Conditioning::HalfTop: keep = q == Quadrant::Q1 || q == Quadrant::Q2; break;
    }
    if (keep) kept.push_back(batch.ratios[i]);
  }
  return ks_test(std::move(kept), cdf);
}

DensityKind density_kind_for(Conditioning conditioning, bool singular) noexcept {
  switch (conditioning) {
    case Conditioning::None:
      return singular ? DensityKind::SingularRhoMinus1 : DensityKind::Unconditional;
    case Conditioning::Q1: return DensityKind::Q1;
    case Conditioning::Q2: return DensityKind::Q2;
    case Conditioning::Q3: return DensityKind::Q3;
    case Conditioning::Q4: return DensityKind::Q4;
    case Conditioning::HalfTop: return DensityKind::HalfTop;
  }
  return DensityKind::Unconditional;
}

std::function<double(double)> ratio_cdf(const BivariateParams& params, Conditioning conditioning,
                                        const Tolerances& tol) {
  if (params.is_singular()) {
    if (conditioning != Conditioning::None) {
      throw Error(ErrorCode::KindMismatch, "rho = -1 supports only the unconditioned CDF");
    }
    return [params](double x) { return cdf_singular(params, x); };
  }
  const DensityKind kind = density_kind_for(conditioning, false);
  auto eval = std::make_shared<DensityEvaluator>(params, kind, tol);

  NumericCdf::Options o;
  const double mu2 = std::abs(params.mu2());
  o.centre = mu2 > 3.0 * params.sigma2() ? params.mu1() / params.mu2() : 0.0;
  o.scale = (params.sigma1() + std::abs(o.centre) * params.sigma2()) /
            std::max(mu2, params.sigma2());
  o.abs_tol = tol.cdf_abs;
  const Support s = support_of(kind);
  if (!s.negative) o.lower = 0.0;
  if (!s.positive) o.upper = 0.0;
  auto table = std::make_shared<NumericCdf>([eval](double x) { return (*eval)(x); }, o);
  return [table](double x) { return (*table)(x); };
}

double hill_estimator(std::vector<double> samples, std::size_t k) {
  const std::size_t n = samples.size();
  if (k == 0 || k >= n) {
    std::ostringstream os;
    os << "Hill estimator needs 0 < k < n (k=" << k << ", n=" << n << ")";
    throw Error(ErrorCode::InsufficientTail, os.str());
  }
  // Top k + 1 values, largest first.
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k),
                   samples.end(), std::greater<>());
  const double base = samples[k];
  if (!(base > 0.0)) {
    throw Error(ErrorCode::InsufficientTail, "tail order statistics must be strictly positive");
  }
  const double log_base = std::log(base);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(samples[i]) - log_base;
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::InsufficientTail, "top order statistics are all tied");
  }
  return static_cast<double>(k) / sum;
}

}  // namespace ratnorm
