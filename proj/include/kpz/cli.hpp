#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kpz::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,         // unknown subcommand, unknown flag, missing subcommand
  kInvalidValue = 3,  // malformed or out-of-range value, bad config file
  kUnwritable = 4,    // output path cannot be opened for writing
  kNumeric = 5,       // numerical failure while running
};

struct ExperimentConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  double t = 1000.0;
  std::size_t runs = 1000;
  std::size_t N = 100;
  double rho = 0.5;
  double u_max = 2.0;
  double du = 0.5;
  std::size_t n_quad = 80;
  double M = 16.0;  // truncation margin: cut k integrates over [s_k, s_k + M]
  std::string out;  // empty writes to stdout
  std::string ic = "step";
  std::string ensemble = "gue";
  double s_min = -8.0;
  double s_max = 6.0;
  double ds = 0.1;
  double bin = 0.05;
};

// Throws std::invalid_argument describing the first violated constraint.
void validate(const ExperimentConfig& config);

// "# key=value" lines recording every field, the seed and the version.
std::string header(const ExperimentConfig& config);

// Produces the CSV body (header included) for a validated config.
std::string render(const ExperimentConfig& config);

// Runs a validated config and writes the result. Returns an ExitCode.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// Parses arguments (and an optional --config key=value file, flags win),
// then runs. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kpz::cli
