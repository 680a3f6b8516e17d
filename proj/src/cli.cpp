#include "kpz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "kpz/experiments.hpp"
#include "kpz/fredholm.hpp"
#include "kpz/stats.hpp"
#include "kpz/tasep.hpp"

#ifndef KPZ_VERSION
#define KPZ_VERSION "unknown"
#endif

namespace kpz::cli {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

fredholm::GridSpec grid_of(const ExperimentConfig& c) { return {c.n_quad, c.M}; }

fredholm::CovarianceOptions cov_options(const ExperimentConfig& c) {
  fredholm::CovarianceOptions o;
  o.grid = grid_of(c);
  return o;
}

// Theory CDF of the rescaled one-point height, clamped to 0/1 beyond the
// tabulated range (both tails are below 1e-11 there).
double onepoint_theory(const std::string& ic, double s, const fredholm::GridSpec& g) {
  if (ic == "step") {
    if (s < -10.0) return 0.0;
    if (s > 6.0) return 1.0;
    return fredholm::f2(s, g);
  }
  if (s < -5.0) return 0.0;
  if (s > 3.0) return 1.0;
  return fredholm::one_point_cdf(fredholm::ProcessKind::kAiry1, s, g);
}

bool onepoint_theory_defined(const std::string& ic, double s) {
  if (ic == "step") return s >= -10.0 && s <= 6.0;
  if (ic == "flat") return s >= -5.0 && s <= 3.0;
  return false;
}

tasep::InitialCondition ic_of(const ExperimentConfig& c) {
  if (c.ic == "step") return tasep::InitialCondition::step();
  if (c.ic == "flat") return tasep::InitialCondition::flat();
  return tasep::InitialCondition::stationary(c.rho);
}

std::string tw_table(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "s,F1,F2\n";
  for (double s : experiments::uniform_grid(c.s_min, c.s_max, c.ds)) {
    os << num(s) << ',' << num(fredholm::f1(s, grid_of(c))) << ',' << num(fredholm::f2(s, grid_of(c))) << '\n';
  }
  return os.str();
}

std::string airy_cov(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "u,g1,g2\n";
  for (double u : experiments::uniform_grid(0.0, c.u_max, c.du)) {
    const double g1 = fredholm::covariance(fredholm::ProcessKind::kAiry1, u, cov_options(c));
    const double g2 = fredholm::covariance(fredholm::ProcessKind::kAiry2, u, cov_options(c));
    os << num(u) << ',' << num(g1) << ',' << num(g2) << '\n';
  }
  return os.str();
}

std::string tasep_onepoint(const ExperimentConfig& c) {
  const auto samples = experiments::tasep_onepoint(ic_of(c), c.t, 0.0, c.runs, c.seed);
  const stats::EmpiricalDistribution dist(samples);
  std::ostringstream os;
  if (c.ic != "stat") {
    const double ks = stats::ks_distance(dist, [&](double s) { return onepoint_theory(c.ic, s, grid_of(c)); });
    os << "# ks=" << num(ks) << '\n';
  }
  const auto m = stats::moments(dist);
  os << "# sample_mean=" << num(m.mean) << " sample_variance=" << num(m.variance) << '\n';
  os << "s,ecdf,theory\n";
  for (double s : experiments::uniform_grid(c.s_min, c.s_max, c.ds)) {
    os << num(s) << ',' << num(dist.ecdf(s)) << ',';
    os << (onepoint_theory_defined(c.ic, s) ? num(onepoint_theory(c.ic, s, grid_of(c))) : std::string("nan")) << '\n';
  }
  return os.str();
}

std::string tasep_shape(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "xi,density,theory\n";
  for (const auto& p : experiments::tasep_density(c.t, c.bin, c.runs, c.seed)) {
    os << num(p.xi) << ',' << num(p.density) << ',' << num(p.theory) << '\n';
  }
  return os.str();
}

struct DbmColumn {
  std::vector<stats::CovarianceEstimate> estimates;
};

DbmColumn dbm_column(rmt::EnsembleKind kind, const ExperimentConfig& c, const std::vector<double>& grid) {
  const auto paths = experiments::dbm_paths(kind, c.N, grid, c.runs, c.seed);
  return {experiments::path_covariances(paths, grid)};
}

std::string dbm_cov(const ExperimentConfig& c) {
  const auto grid = experiments::uniform_grid(0.0, c.u_max, c.du);
  const bool gue = c.ensemble == "gue";
  const auto col = dbm_column(gue ? rmt::EnsembleKind::kGUE : rmt::EnsembleKind::kGOE, c, grid);
  const auto kind = gue ? fredholm::ProcessKind::kAiry2 : fredholm::ProcessKind::kAiry1;
  std::ostringstream os;
  os << "u,f_hat,stderr,theory\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    os << num(grid[k]) << ',' << num(col.estimates[k].value) << ',' << num(col.estimates[k].stderr) << ','
       << num(fredholm::covariance(kind, grid[k], cov_options(c))) << '\n';
  }
  return os.str();
}

std::string compare(const ExperimentConfig& c) {
  const auto grid = experiments::uniform_grid(0.0, c.u_max, c.du);
  const auto gue = dbm_column(rmt::EnsembleKind::kGUE, c, grid);
  const auto goe = dbm_column(rmt::EnsembleKind::kGOE, c, grid);
  std::ostringstream os;
  os << "u,g1,g2,f_gue,f_gue_stderr,f_goe,f_goe_stderr\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    os << num(grid[k]) << ',' << num(fredholm::covariance(fredholm::ProcessKind::kAiry1, grid[k], cov_options(c)))
       << ',' << num(fredholm::covariance(fredholm::ProcessKind::kAiry2, grid[k], cov_options(c))) << ','
       << num(gue.estimates[k].value) << ',' << num(gue.estimates[k].stderr) << ',' << num(goe.estimates[k].value)
       << ',' << num(goe.estimates[k].stderr) << '\n';
  }
  return os.str();
}

bool uses_covariance_grid(const std::string& sub) {
  return sub == "airy-cov" || sub == "dbm-cov" || sub == "compare";
}

}  // namespace

void validate(const ExperimentConfig& c) {
  static const std::vector<std::string> known = {"tw-table",    "airy-cov", "tasep-onepoint",
                                                 "tasep-shape", "dbm-cov",  "compare"};
  require(std::find(known.begin(), known.end(), c.subcommand) != known.end(), "unknown subcommand '" + c.subcommand + "'");
  require(c.runs > 0, "runs must be positive");
  require(c.N > 0, "N must be positive");
  require(c.n_quad >= fredholm::kMinNodes, "n_quad must be at least " + std::to_string(fredholm::kMinNodes));
  require(std::isfinite(c.M) && c.M >= fredholm::kMinMargin, "M must be at least " + num(fredholm::kMinMargin));
  require(std::isfinite(c.t) && c.t > 0.0, "t must be positive");
  require(c.rho > 0.0 && c.rho < 1.0, "rho must lie in (0, 1)");
  require(std::isfinite(c.du) && c.du > 0.0, "du must be positive");
  require(std::isfinite(c.u_max) && c.u_max >= c.du, "u_max must be at least du");
  require(std::isfinite(c.ds) && c.ds > 0.0, "ds must be positive");
  require(std::isfinite(c.s_min) && std::isfinite(c.s_max) && c.s_min < c.s_max, "s_min must be below s_max");
  require(std::isfinite(c.bin) && c.bin > 0.0 && c.bin <= 1.0, "bin must lie in (0, 1]");
  require(c.ic == "step" || c.ic == "flat" || c.ic == "stat", "ic must be step, flat or stat");
  require(c.ensemble == "gue" || c.ensemble == "goe", "ensemble must be gue or goe");
  if (c.subcommand == "tw-table") require(c.s_min >= -10.0 && c.s_max <= 6.0, "tw-table needs -10 <= s_min < s_max <= 6");
  if (c.subcommand == "dbm-cov" || c.subcommand == "compare") {
    require(c.runs >= 2 * stats::kMinBatches, "covariance estimates need runs >= " + std::to_string(2 * stats::kMinBatches));
  }
  if (c.subcommand == "tasep-onepoint" || c.subcommand == "tasep-shape") {
    require(c.t <= 1e6, "t above 1e6 is not supported");
  }
  if (uses_covariance_grid(c.subcommand)) require(c.u_max <= 50.0, "u_max above 50 is not supported");
}

std::string header(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "# kpzlab " << KPZ_VERSION << '\n';
  os << "# subcommand=" << c.subcommand << '\n';
  os << "# seed=" << c.seed << '\n';
  os << "# t=" << num(c.t) << " runs=" << c.runs << " N=" << c.N << " rho=" << num(c.rho) << '\n';
  os << "# u_max=" << num(c.u_max) << " du=" << num(c.du) << " n_quad=" << c.n_quad << " M=" << num(c.M) << '\n';
  os << "# ic=" << c.ic << " ensemble=" << c.ensemble << " s_min=" << num(c.s_min) << " s_max=" << num(c.s_max)
     << " ds=" << num(c.ds) << " bin=" << num(c.bin) << '\n';
  return os.str();
}

std::string render(const ExperimentConfig& c) {
  std::string body;
  if (c.subcommand == "tw-table") body = tw_table(c);
  else if (c.subcommand == "airy-cov") body = airy_cov(c);
  else if (c.subcommand == "tasep-onepoint") body = tasep_onepoint(c);
  else if (c.subcommand == "tasep-shape") body = tasep_shape(c);
  else if (c.subcommand == "dbm-cov") body = dbm_cov(c);
  else if (c.subcommand == "compare") body = compare(c);
  else throw std::invalid_argument("unknown subcommand '" + c.subcommand + "'");
  return header(c) + body;
}

int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
  } catch (const std::exception& e) {
    err << "kpzlab: invalid value: " << e.what() << '\n';
    return c.subcommand.empty() ? kUsage : kInvalidValue;
  }
  std::ofstream file;
  if (!c.out.empty()) {
    // Opened before the computation so a bad path fails fast.
    file.open(c.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "kpzlab: cannot write output file '" << c.out << "'\n";
      return kUnwritable;
    }
  }
  std::string text;
  try {
    text = render(c);
  } catch (const std::invalid_argument& e) {
    err << "kpzlab: invalid value: " << e.what() << '\n';
    return kInvalidValue;
  } catch (const std::exception& e) {
    err << "kpzlab: numerical failure: " << e.what() << '\n';
    return kNumeric;
  }
  std::ostream& sink = c.out.empty() ? out : static_cast<std::ostream&>(file);
  sink << text;
  sink.flush();
  if (!sink) {
    err << "kpzlab: write failed for '" << (c.out.empty() ? std::string("<stdout>") : c.out) << "'\n";
    return kUnwritable;
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  CLI::App app{"Numerical experiments on TASEP, Airy processes and Dyson Brownian motion", "kpzlab"};
  app.set_version_flag("--version", std::string(KPZ_VERSION));
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(false);

  app.add_option("--seed", c.seed, "root seed");
  app.add_option("--t", c.t, "TASEP time");
  app.add_option("--runs", c.runs, "replicas / samples / paths");
  app.add_option("--N", c.N, "matrix dimension");
  app.add_option("--rho", c.rho, "stationary density");
  app.add_option("--u-max,--u_max", c.u_max, "largest time separation on the covariance grid");
  app.add_option("--du", c.du, "covariance grid step");
  app.add_option("--n-quad,--n_quad", c.n_quad, "Gauss-Legendre nodes per cut");
  app.add_option("--M", c.M, "truncation margin above each cutoff");
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--s-min,--s_min", c.s_min, "first s of the CDF grid");
  app.add_option("--s-max,--s_max", c.s_max, "last s of the CDF grid");
  app.add_option("--ds", c.ds, "CDF grid step");
  app.add_option("--bin", c.bin, "density bin width in xi");
  app.add_option("--ic", c.ic, "initial condition for tasep-onepoint")->check(CLI::IsMember({"step", "flat", "stat"}));
  app.add_option("--ensemble", c.ensemble, "ensemble for dbm-cov")->check(CLI::IsMember({"gue", "goe"}));

  app.add_subcommand("tw-table", "F_1 and F_2 on an s grid");
  app.add_subcommand("airy-cov", "Airy_1 and Airy_2 two-time covariances");
  app.add_subcommand("tasep-onepoint", "rescaled one-point height ECDF against its limit law");
  app.add_subcommand("tasep-shape", "step-IC density profile against the rarefaction fan");
  app.add_subcommand("dbm-cov", "DBM largest-eigenvalue covariance against the Airy prediction");
  app.add_subcommand("compare", "GUE and GOE DBM covariances side by side with g_1 and g_2");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << KPZ_VERSION << '\n';
    return kOk;
  } catch (const CLI::ConversionError& e) {
    err << "kpzlab: invalid value: " << e.what() << '\n';
    return kInvalidValue;
  } catch (const CLI::ValidationError& e) {
    err << "kpzlab: invalid value: " << e.what() << '\n';
    return kInvalidValue;
  } catch (const CLI::ConfigError& e) {
    err << "kpzlab: bad config file: " << e.what() << '\n';
    return kInvalidValue;
  } catch (const CLI::FileError& e) {
    err << "kpzlab: bad config file: " << e.what() << '\n';
    return kInvalidValue;
  } catch (const CLI::ParseError& e) {
    err << "kpzlab: usage: " << e.what() << '\n' << "run 'kpzlab --help' for the list of subcommands\n";
    return kUsage;
  }
  if (app.get_subcommands().empty()) {
    err << "kpzlab: usage: a subcommand is required\n" << "run 'kpzlab --help' for the list of subcommands\n";
    return kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace kpz::cli
