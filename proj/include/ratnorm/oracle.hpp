#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ratnorm/density.hpp"
#include "ratnorm/numeric_cdf.hpp"
#include "ratnorm/params.hpp"
#include "ratnorm/quadprob.hpp"

namespace ratnorm {

inline constexpr std::size_t kSampleChunk = 65536;
inline constexpr std::size_t kMinKsSamples = 100;

/// Draws (X1, X2) pairs from one seeded stream. X2 == 0 draws are
/// discarded and redrawn.
class PairSampler {
 public:
  PairSampler(const BivariateParams& params, std::uint64_t seed);

  struct Pair {
    double x1;
    double x2;
  };
  Pair next();

 private:
  BivariateParams params_;
  double tilt_;
  double spread_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

Quadrant quadrant_of(double x1, double x2) noexcept;

struct SampleBatch {
  std::vector<double> ratios;
  std::vector<std::uint8_t> quadrants;  ///< Quadrant of each sample, as its enum value
  std::array<std::size_t, 4> quadrant_counts{};
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// n draws, generated in chunks of kSampleChunk whose seeds are derived from
/// (seed, chunk index); the result does not depend on the worker count.
SampleBatch sample_bivariate(const BivariateParams& params, std::size_t n, std::uint64_t seed);

/// The same stream as sample_bivariate, returned as raw pairs.
std::vector<PairSampler::Pair> sample_pairs(const BivariateParams& params, std::size_t n,
                                            std::uint64_t seed);

struct GofReport {
  double ks_statistic;
  double ks_threshold_95;
  std::size_t n_effective;
  bool passed;
};

enum class Conditioning { None, Q1, Q2, Q3, Q4, HalfTop };

/// Two-sided KS statistic of sorted samples against cdf, with the 95%
/// threshold 1.358/sqrt(n). Throws InsufficientSamples below 100 samples.
GofReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// KS test of the ratios falling in the conditioning event.
GofReport ks_against_numeric(const SampleBatch& batch, const std::function<double(double)>& cdf,
                             Conditioning conditioning);

/// Density kind whose CDF the conditioned ratios follow.
DensityKind density_kind_for(Conditioning conditioning, bool singular) noexcept;

/// CDF of the ratio under the conditioning event: closed form for rho = -1
/// unconditioned, otherwise a NumericCdf of the matching density.
std::function<double(double)> ratio_cdf(const BivariateParams& params, Conditioning conditioning,
                                        const Tolerances& tol = {});

/// Hill estimate from the k largest of samples. Throws InsufficientTail if
/// k == 0, k >= samples.size(), or any of the k + 1 largest values is not
/// strictly positive.
double hill_estimator(std::vector<double> samples, std::size_t k);

}  // namespace ratnorm
