#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace ratnorm {

/// CDF of a density on the real line, tabulated once and interpolated.
///
/// The line is mapped onto (-pi/2, pi/2) by x = c + s tan(theta), which
/// turns x^-2 tails into bounded integrands. G(theta) is accumulated with
/// 15-point Gauss-Kronrod panels that are bisected until both the panel
/// integral and the cubic Hermite interpolant at the panel midpoint agree
/// to the requested absolute accuracy. The table is not renormalised:
/// total_mass() reports what the density integrates to.
class NumericCdf {
 public:
  struct Options {
    double centre = 0.0;
    double scale = 1.0;
    /// Support restriction: [lower, upper], either may be infinite.
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double abs_tol = 1e-9;
    std::size_t initial_panels = 64;
  };

  NumericCdf(std::function<double(double)> density, const Options& options);

  /// P(X <= x), clamped to [0, 1].
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double total_mass() const noexcept { return cumulative_.back(); }
  [[nodiscard]] std::size_t node_count() const noexcept { return theta_.size(); }

 private:
  [[nodiscard]] double integrand(double theta) const;
  void refine(double a, double b, double ga, double gb, double whole, double tol, int depth);

  std::function<double(double)> density_;
  double centre_;
  double scale_;
  double theta_lo_;
  double theta_hi_;
  double abs_tol_;
  std::vector<double> theta_;
  std::vector<double> cumulative_;
  std::vector<double> slope_;
};

}  // namespace ratnorm
