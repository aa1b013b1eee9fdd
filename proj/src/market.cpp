#include "ratnorm/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ratnorm/density.hpp"
#include "ratnorm/error.hpp"
#include "ratnorm/parallel.hpp"
#include "ratnorm/specfun.hpp"

namespace ratnorm {
namespace {

// Phi^{-1}(3/4): MAD of a normal is this many standard deviations.
constexpr double kMadPerSigma = 0.6744897501960817;

double quantile_sorted(const std::vector<double>& v, double p) {
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return std::lerp(v[lo], v[hi], pos - static_cast<double>(lo));
}

}  // namespace

void validate_config(const MarketConfig& c) {
  std::ostringstream os;
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) os << "dt must be positive; ";
  if (!(c.p0 > 0.0) || !std::isfinite(c.p0)) os << "p0 must be positive; ";
  if (c.n_steps == 0) os << "n_steps must be at least 1; ";
  if (c.n_paths == 0) os << "n_paths must be at least 1; ";
  if (c.clamp && !(*c.clamp > 0.0)) os << "clamp must be positive; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorCode::InvalidArgument, msg.substr(0, msg.size() - 2));
}

PathSet simulate(const MarketConfig& c) {
  validate_config(c);
  PathSet out;
  out.n_paths = c.n_paths;
  out.n_steps = c.n_steps;
  out.returns.resize(c.n_paths * c.n_steps);
  out.log_prices.resize(c.n_paths * (c.n_steps + 1));
  out.prices.resize(out.log_prices.size());
  const double log_p0 = std::log(c.p0);
  const double floor = std::numeric_limits<double>::min();
  const double ceiling = std::numeric_limits<double>::max();

  parallel_for(c.n_paths, [&](std::size_t path) {
    PairSampler sampler(c.params, derive_seed(c.seed, path));
    double* r = out.returns.data() + path * c.n_steps;
    double* lp = out.log_prices.data() + path * (c.n_steps + 1);
    double* pr = out.prices.data() + path * (c.n_steps + 1);
    lp[0] = log_p0;
    for (std::size_t t = 0; t < c.n_steps; ++t) {
      const auto [d, s] = sampler.next();
      double ret = d / s - 1.0;
      if (c.clamp) ret = std::clamp(ret, -*c.clamp, *c.clamp);
      r[t] = ret;
      lp[t + 1] = lp[t] + ret * c.dt;
    }
    for (std::size_t t = 0; t <= c.n_steps; ++t) pr[t] = std::clamp(std::exp(lp[t]), floor, ceiling);
  });
  return out;
}

GofReport returns_distribution_check(const PathSet& paths, const BivariateParams& params,
                                     const Tolerances& tol) {
  if (paths.returns.size() < kMinReturnsForCheck) {
    std::ostringstream os;
    os << "returns check needs at least " << kMinReturnsForCheck << " returns, got "
       << paths.returns.size();
    throw Error(ErrorCode::InsufficientSamples, os.str());
  }
  const auto ratio = ratio_cdf(params, Conditioning::None, tol);
  return ks_test(paths.returns, [&ratio](double r) { return ratio(r + 1.0); });
}

TailExceedance tail_exceedance(const std::vector<double>& returns, double iqr_multiple) {
  if (returns.size() < 4) {
    throw Error(ErrorCode::InvalidArgument, "tail exceedance needs at least 4 returns");
  }
  std::vector<double> sorted = returns;
  std::sort(sorted.begin(), sorted.end());
  TailExceedance t{};
  t.median = quantile_sorted(sorted, 0.5);
  t.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  std::vector<double> dev(sorted.size());
  std::transform(sorted.begin(), sorted.end(), dev.begin(),
                 [&](double r) { return std::abs(r - t.median); });
  std::sort(dev.begin(), dev.end());
  t.mad = quantile_sorted(dev, 0.5);
  t.threshold = iqr_multiple * t.iqr;
  const auto beyond = static_cast<double>(
      dev.end() - std::upper_bound(dev.begin(), dev.end(), t.threshold));
  t.empirical = beyond / static_cast<double>(dev.size());
  const double sigma = t.mad / kMadPerSigma;
  t.gaussian = sigma > 0.0 ? 2.0 * cap_phi(-t.threshold / sigma) : 0.0;
  t.ratio = t.gaussian > 0.0 ? t.empirical / t.gaussian
                             : (t.empirical > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return t;
}

}  // namespace ratnorm
