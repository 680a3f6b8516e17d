#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kpz/rmt.hpp"
#include "kpz/stats.hpp"
#include "kpz/tasep.hpp"

// Monte-Carlo drivers shared by the command-line tool and the acceptance
// suite. Replica r of an experiment always draws from
// make_engine(seed, channel(tag), r), so results are independent of the
// worker count.
namespace kpz::experiments {

std::uint64_t channel(std::string_view tag);

// Rescaled one-point heights h^resc_t(u) of `runs` independent TASEP
// replicas (step: F_2 scaling, flat: F_1(2s) scaling, stationary:
// characteristic-frame scaling with the given rho).
std::vector<double> tasep_onepoint(const tasep::InitialCondition& ic, double t, double u, std::size_t runs,
                                   std::uint64_t seed);

// Raw heights at the characteristic site (u = 0) of stationary TASEP,
// each replica evolved through every time in `times` (increasing).
// Result[r][k] is replica r at times[k].
std::vector<std::vector<double>> tasep_stationary_heights(double rho, std::span<const double> times, std::size_t runs,
                                                          std::uint64_t seed);

struct DensityPoint {
  double xi = 0.0;
  double density = 0.0;
  double theory = 0.0;
  std::size_t sites = 0;
};

// Step-IC density in macroscopic bins at time t, pooled over replicas.
std::vector<DensityPoint> tasep_density(double t, double bin_width, std::size_t runs, std::uint64_t seed);

// Hydrodynamic step-IC density: 1 for xi < -1, (1 - xi)/2 inside, 0 for xi > 1.
double rarefaction_density(double xi);

// Static rescaled largest eigenvalues (lambda - 2N)/N^{1/3}.
std::vector<double> rmt_static(rmt::EnsembleKind kind, std::size_t n, std::size_t samples, std::uint64_t seed);

// Rescaled DBM paths on u_grid; result[r] is path r.
std::vector<std::vector<double>> dbm_paths(rmt::EnsembleKind kind, std::size_t n, std::span<const double> u_grid,
                                           std::size_t paths, std::uint64_t seed);

// Covariance estimates Cov(path(u_k), path(0)) for every grid point.
std::vector<stats::CovarianceEstimate> path_covariances(const std::vector<std::vector<double>>& paths,
                                                        std::span<const double> u_grid);

// u_grid = {0, du, 2 du, ...} up to u_max (inclusive within 1e-9).
std::vector<double> uniform_grid(double start, double stop, double step);

}  // namespace kpz::experiments
