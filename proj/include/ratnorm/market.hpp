#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ratnorm/oracle.hpp"
#include "ratnorm/params.hpp"

namespace ratnorm {

/// Demand D is X1, supply S is X2. Each step draws a fresh (D, S) and moves
/// the log price by (D/S - 1) dt.
struct MarketConfig {
  BivariateParams params;
  double dt = 1.0;
  std::size_t n_steps = 1;
  std::size_t n_paths = 1;
  double p0 = 1.0;
  std::uint64_t seed = 0;
  /// Cap on |D/S - 1| per step; disabled when empty.
  std::optional<double> clamp{};
};

/// Row-major matrices: returns is n_paths x n_steps, log_prices and prices
/// are n_paths x (n_steps + 1).
struct PathSet {
  std::size_t n_paths = 0;
  std::size_t n_steps = 0;
  std::vector<double> returns;
  std::vector<double> log_prices;
  std::vector<double> prices;

  [[nodiscard]] double return_at(std::size_t path, std::size_t step) const {
    return returns[path * n_steps + step];
  }
  [[nodiscard]] double price_at(std::size_t path, std::size_t step) const {
    return prices[path * (n_steps + 1) + step];
  }
};

/// Throws InvalidArgument for dt <= 0, p0 <= 0, zero steps or paths, or a
/// non-positive clamp.
void validate_config(const MarketConfig& config);

/// Paths run in parallel, path i drawing from derive_seed(seed, i).
/// Prices are exp(log price), kept within the finite normal doubles.
PathSet simulate(const MarketConfig& config);

inline constexpr std::size_t kMinReturnsForCheck = 10000;

/// KS test of the pooled returns against the law of X1/X2 - 1.
/// Throws InsufficientSamples below 10^4 returns.
GofReport returns_distribution_check(const PathSet& paths, const BivariateParams& params,
                                     const Tolerances& tol = {});

struct TailExceedance {
  double median;
  double iqr;
  double mad;
  double threshold;      ///< multiple * iqr
  double empirical;      ///< fraction with |r - median| > threshold
  double gaussian;       ///< same fraction under N(median, (mad/0.6745)^2)
  double ratio;          ///< empirical / gaussian (infinite if gaussian underflows)
};

/// Dispersion-robust fat-tail metric. Throws InvalidArgument for fewer than
/// 4 returns.
TailExceedance tail_exceedance(const std::vector<double>& returns, double iqr_multiple = 10.0);

}  // namespace ratnorm
