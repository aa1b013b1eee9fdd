#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cli_app.hpp"
#include "ratnorm/market.hpp"
#include "ratnorm/oracle.hpp"

// Tail index of simulated returns for the (1, 1, 0.2, 0.2, -0.9) market.

TEST_CASE("Hill index of demonstration returns") {
  ratnorm::MarketConfig c{.params = ratnorm::BivariateParams::validate(1, 1, 0.2, 0.2, -0.9)};
  c.n_steps = 1'000'000;
  c.seed = 20240917;
  const auto paths = ratnorm::simulate(c);
  std::vector<double> a(paths.returns.size());
  std::transform(paths.returns.begin(), paths.returns.end(), a.begin(),
                 [](double r) { return std::abs(r); });
  const double alpha = ratnorm::hill_estimator(std::move(a), 10'000);
  CAPTURE(alpha);
  CHECK(alpha >= 0.8);
  CHECK(alpha <= 1.2);
}

TEST_CASE("Hill index from the simulate command") {
  std::ostringstream out, err;
  const int code = ratnorm::cli::run({"ratnorm", "simulate", "--mu1", "1", "--mu2", "1", "--sigma1",
                                      "0.2", "--sigma2", "0.2", "--rho", "-0.9", "--steps",
                                      "1000000", "--emit", "hill", "--hill-k", "10000", "--format",
                                      "json"},
                                     out, err);
  REQUIRE(code == 0);
  const auto env = nlohmann::json::parse(out.str());
  const double alpha = env["rows"][0]["alpha"].get<double>();
  CAPTURE(alpha);
  CHECK(alpha >= 0.8);
  CHECK(alpha <= 1.2);
}
