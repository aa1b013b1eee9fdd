#include "cli_app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratnorm/density.hpp"
#include "ratnorm/error.hpp"
#include "ratnorm/market.hpp"
#include "ratnorm/oracle.hpp"
#include "ratnorm/quadprob.hpp"
#include "ratnorm/tail.hpp"

#ifndef RATNORM_VERSION
#define RATNORM_VERSION "0.0.0"
#endif

namespace ratnorm::cli {
namespace {

using json = nlohmann::json;

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

json json_cell(const Cell& c) {
  struct {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double v) const { return std::isfinite(v) ? json(v) : json(format_double(v)); }
    json operator()(std::int64_t v) const { return v; }
    json operator()(const std::string& v) const { return v; }
    json operator()(bool v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

Cell opt_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{std::monostate{}};
}

// Options shared by every subcommand.
struct Common {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho = 0.0;
  std::string format = "csv";
  Tolerances tol;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--mu1", c.mu1, "Mean of the numerator X1")->required();
  sub->add_option("--mu2", c.mu2, "Mean of the denominator X2")->required();
  sub->add_option("--sigma1", c.sigma1, "Standard deviation of X1 (> 0)")->required();
  sub->add_option("--sigma2", c.sigma2, "Standard deviation of X2 (> 0)")->required();
  sub->add_option("--rho", c.rho, "Correlation in [-1, 1); exactly -1 selects the singular case")
      ->required();
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--orthant-tol", c.tol.orthant_rel,
                  "Relative tolerance of the orthant-probability integrals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--slice-tol", c.tol.slice_rel,
                  "Relative tolerance of the Q2/Q4 slice integrals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--cdf-tol", c.tol.cdf_abs, "Absolute accuracy of tabulated numeric CDFs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

json params_echo(const Common& c) {
  return json{{"mu1", c.mu1}, {"mu2", c.mu2}, {"sigma1", c.sigma1}, {"sigma2", c.sigma2},
              {"rho", c.rho}};
}

json tolerance_echo(const Tolerances& t) {
  return json{{"orthant_rel", t.orthant_rel}, {"slice_rel", t.slice_rel}, {"cdf_abs", t.cdf_abs}};
}

void emit(std::ostream& out, const std::string& command, const Common& c, const Table& table,
          json metadata, const json& summary = nullptr) {
  if (c.format == "csv") {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
    return;
  }
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  metadata["version"] = RATNORM_VERSION;
  metadata["tolerances"] = tolerance_echo(c.tol);
  json env{{"command", command}, {"params", params_echo(c)}, {"rows", std::move(rows)},
           {"metadata", std::move(metadata)}};
  if (!summary.is_null()) env["summary"] = summary;
  out << env.dump(2) << '\n';
}

BivariateParams make_params(const Common& c) {
  return BivariateParams::validate(c.mu1, c.mu2, c.sigma1, c.sigma2, c.rho);
}

// ---- density ---------------------------------------------------------------

struct DensityArgs {
  std::string kind;
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t points = 0;
  bool log_grid = false;
};

const std::map<std::string, DensityKind>& kind_table() {
  static const std::map<std::string, DensityKind> table{
      {"q1", DensityKind::Q1},
      {"q2", DensityKind::Q2},
      {"q3", DensityKind::Q3},
      {"q4", DensityKind::Q4},
      {"htop", DensityKind::HalfTop},
      {"hbottom", DensityKind::HalfBottom},
      {"uncond", DensityKind::Unconditional},
      {"singular", DensityKind::SingularRhoMinus1},
      {"cauchy", DensityKind::CauchyReference},
      {"cauchy-full", DensityKind::CauchyReference},
      {"constdenom", DensityKind::ConstDenomApprox},
  };
  return table;
}

int cmd_density(const Common& c, const DensityArgs& a, std::ostream& out) {
  const BivariateParams params = make_params(c);
  const GridSpacing spacing = a.log_grid ? GridSpacing::Log : GridSpacing::Linear;
  const DensityCurve curve = [&] {
    if (a.kind != "cauchy-full") {
      return sample_curve(params, kind_table().at(a.kind), a.x_min, a.x_max, a.points, spacing,
                          c.tol);
    }
    DensityCurve full{make_grid(a.x_min, a.x_max, a.points, spacing), {},
                      DensityKind::CauchyReference, params};
    for (double x : full.xs) full.values.push_back(cauchy_reference(x, false));
    return full;
  }();
  Table t{{"x", "density"}, {}};
  for (std::size_t i = 0; i < curve.xs.size(); ++i) {
    t.rows.push_back({curve.xs[i], curve.values[i]});
  }
  emit(out, "density", c, t,
       json{{"kind", a.kind}, {"grid", a.log_grid ? "log" : "linear"}, {"points", a.points}});
  return kSuccess;
}

// ---- quadrants -------------------------------------------------------------

int cmd_quadrants(const Common& c, std::ostream& out) {
  const BivariateParams params = make_params(c);
  const QuadrantProbs q = quadrant_masses(params, c.tol);
  Table t{{"q1", "q2", "q3", "q4", "h_top", "h_bottom", "sum"},
          {{q.q1, q.q2, q.q3, q.q4, q.h_top, q.h_bottom, q.sum()}}};
  emit(out, "quadrants", c, t,
       json{{"method", params.is_singular() ? "singular-interval" : "orthant-integral"}});
  return kSuccess;
}

// ---- tail ------------------------------------------------------------------

int cmd_tail(const Common& c, const std::vector<double>& grid, std::ostream& out) {
  const BivariateParams params = make_params(c);
  const TailReport report = tail_report(params, grid);
  const QuadrantProbs probs = quadrant_probs(params, c.tol);

  std::optional<RemainderBounds> at_x0;
  try {
    at_x0 = remainder_bounds(params, report.x0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UndefinedRatio) throw;
  }

  Table t{{"x", "exponent", "prediction", "remainder_bound", "f0", "x0"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({report.exponent_at[i].first, report.exponent_at[i].second,
                      tail_expansion_prediction(params, grid[i], probs),
                      opt_cell(report.remainder_bound_at[i].second), report.f0, report.x0});
  }
  json summary{{"f0", report.f0}, {"log_f0", report.log_f0}, {"x0", report.x0}};
  if (at_x0) {
    summary["remainder_at_x0"] = json{{"r1", at_x0->r1}, {"r2", at_x0->r2}, {"r3", at_x0->r3},
                                      {"r4_total", at_x0->r4_total}};
  } else {
    summary["remainder_at_x0"] = json{{"r1", nullptr}, {"r2", nullptr}, {"r3", nullptr},
                                      {"r4_total", nullptr}};
  }
  emit(out, "tail", c, t, json::object(), summary);
  return kSuccess;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs {
  std::size_t samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> conditioning{"none"};
  bool corrupt_cdf = false;
};

const std::map<std::string, Conditioning>& conditioning_table() {
  static const std::map<std::string, Conditioning> table{
      {"none", Conditioning::None}, {"q1", Conditioning::Q1}, {"q2", Conditioning::Q2},
      {"q3", Conditioning::Q3},     {"q4", Conditioning::Q4}, {"htop", Conditioning::HalfTop},
  };
  return table;
}

int cmd_validate(const Common& c, const ValidateArgs& a, std::ostream& out) {
  const BivariateParams params = make_params(c);
  // The negative control compares against the law with the means swapped.
  const BivariateParams reference =
      a.corrupt_cdf
          ? BivariateParams::validate(c.mu2, c.mu1, c.sigma1, c.sigma2, c.rho)
          : params;
  const SampleBatch batch = sample_bivariate(params, a.samples, a.seed);

  Table t{{"conditioning", "ks_statistic", "ks_threshold_95", "n_effective", "passed"}, {}};
  bool all_passed = true;
  for (const auto& name : a.conditioning) {
    const Conditioning cond = conditioning_table().at(name);
    const auto cdf = ratio_cdf(reference, cond, c.tol);
    const GofReport r = ks_against_numeric(batch, cdf, cond);
    all_passed = all_passed && r.passed;
    t.rows.push_back({name, r.ks_statistic, r.ks_threshold_95,
                      static_cast<std::int64_t>(r.n_effective), r.passed});
  }
  emit(out, "validate", c, t,
       json{{"seed", a.seed}, {"samples", a.samples}, {"corrupt_cdf", a.corrupt_cdf}});
  return all_passed ? kSuccess : kValidationFailed;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  double dt = 1.0;
  std::size_t steps = 0;
  std::size_t paths = 1;
  double p0 = 1.0;
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> clamp;
  std::string emit = "prices";
  std::size_t hill_k = 10000;
};

int cmd_simulate(const Common& c, const SimulateArgs& a, std::ostream& out) {
  MarketConfig cfg{make_params(c), a.dt, a.steps, a.paths, a.p0, a.seed, a.clamp};
  const PathSet paths = simulate(cfg);
  json meta{{"seed", a.seed},   {"dt", a.dt},     {"steps", a.steps},
            {"paths", a.paths}, {"p0", a.p0},     {"emit", a.emit},
            {"clamp", a.clamp ? json(*a.clamp) : json(nullptr)}};
  Table t;
  if (a.emit == "returns") {
    t.columns = {"path", "step", "return"};
    for (std::size_t p = 0; p < paths.n_paths; ++p) {
      for (std::size_t s = 0; s < paths.n_steps; ++s) {
        t.rows.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(s + 1),
                          paths.return_at(p, s)});
      }
    }
  } else if (a.emit == "prices") {
    t.columns = {"path", "step", "price"};
    for (std::size_t p = 0; p < paths.n_paths; ++p) {
      for (std::size_t s = 0; s <= paths.n_steps; ++s) {
        t.rows.push_back(
            {static_cast<std::int64_t>(p), static_cast<std::int64_t>(s), paths.price_at(p, s)});
      }
    }
  } else {
    std::vector<double> magnitudes(paths.returns.size());
    std::transform(paths.returns.begin(), paths.returns.end(), magnitudes.begin(),
                   [](double r) { return std::abs(r); });
    const double alpha = hill_estimator(std::move(magnitudes), a.hill_k);
    t.columns = {"k", "n", "alpha"};
    t.rows.push_back({static_cast<std::int64_t>(a.hill_k),
                      static_cast<std::int64_t>(paths.returns.size()), alpha});
    meta["hill_k"] = a.hill_k;
  }
  emit(out, "simulate", c, t, meta);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Densities, quadrant masses, tail asymptotics and Monte-Carlo checks for the "
               "quotient X1/X2 of two correlated normals.",
               "ratnorm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RATNORM_VERSION);

  Common common;

  DensityArgs dargs;
  CLI::App* density = app.add_subcommand("density", "Sample a density curve on a grid");
  add_common(density, common);
  density->add_option("--kind", dargs.kind, "Density to evaluate")
      ->required()
      ->check(CLI::IsMember({"q1", "q2", "q3", "q4", "htop", "hbottom", "uncond", "singular",
                             "cauchy", "cauchy-full", "constdenom"}));
  density->add_option("--x-min", dargs.x_min, "Left end of the grid")->required();
  density->add_option("--x-max", dargs.x_max, "Right end of the grid")->required();
  density->add_option("--points", dargs.points, "Number of grid points (>= 2)")
      ->required()
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  density->add_flag("--log-grid", dargs.log_grid, "Log-spaced grid (needs x-min > 0)");

  CLI::App* quadrants = app.add_subcommand("quadrants", "Quadrant and half-plane masses");
  add_common(quadrants, common);

  std::vector<double> grid{1e2, 1e4, 1e6};
  CLI::App* tail = app.add_subcommand("tail", "Tail coefficient, exponent and remainder bounds");
  add_common(tail, common);
  tail->add_option("--x-grid", grid, "Evaluation points, each above x0")
      ->delimiter(',')
      ->capture_default_str();

  ValidateArgs vargs;
  CLI::App* validate = app.add_subcommand("validate", "KS test of Monte-Carlo ratios");
  add_common(validate, common);
  validate->add_option("--samples", vargs.samples, "Number of (X1, X2) draws")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000000}))
      ->capture_default_str();
  validate->add_option("--seed", vargs.seed, "Random seed")->capture_default_str();
  validate
      ->add_option("--conditioning", vargs.conditioning,
                   "Conditioning events (comma separated or repeated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"none", "q1", "q2", "q3", "q4", "htop"}))
      ->capture_default_str();
  validate->add_flag("--corrupt-cdf", vargs.corrupt_cdf,
                     "Negative control: test against the CDF with mu1 and mu2 swapped");

  SimulateArgs sargs;
  CLI::App* sim = app.add_subcommand("simulate", "Simulate price paths driven by D/S - 1");
  add_common(sim, common);
  sim->add_option("--dt", sargs.dt, "Dimensionless time step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--steps", sargs.steps, "Steps per path")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000000}));
  sim->add_option("--paths", sargs.paths, "Number of paths")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000000}))
      ->capture_default_str();
  sim->add_option("--p0", sargs.p0, "Initial price")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--seed", sargs.seed, "Random seed")->capture_default_str();
  sim->add_option("--clamp", sargs.clamp, "Cap on |D/S - 1| per step (disabled by default)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--emit", sargs.emit, "Series to output")
      ->check(CLI::IsMember({"returns", "prices", "hill"}))
      ->capture_default_str();
  sim->add_option("--hill-k", sargs.hill_k, "Order statistics used by --emit hill")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000000}))
      ->capture_default_str();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (density->parsed() && !(dargs.x_min < dargs.x_max)) {
    err << "error: --x-min must be less than --x-max\n";
    return kUsage;
  }
  if (density->parsed() && dargs.log_grid && !(dargs.x_min > 0.0)) {
    err << "error: --log-grid needs --x-min > 0\n";
    return kUsage;
  }

  try {
    if (density->parsed()) return cmd_density(common, dargs, out);
    if (quadrants->parsed()) return cmd_quadrants(common, out);
    if (tail->parsed()) return cmd_tail(common, grid, out);
    if (validate->parsed()) return cmd_validate(common, vargs, out);
    if (sim->parsed()) return cmd_simulate(common, sargs, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}

}  // namespace ratnorm::cli
