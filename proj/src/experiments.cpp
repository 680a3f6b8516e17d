#include "kpz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kpz/parallel.hpp"

namespace kpz::experiments {

std::uint64_t channel(std::string_view tag) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string tag_of(std::string_view family, const tasep::InitialCondition& ic, double t, double u) {
  std::ostringstream os;
  os.precision(17);
  os << family << "/" << tasep::to_string(ic) << "/t=" << t << "/u=" << u;
  return os.str();
}

}  // namespace

std::vector<double> tasep_onepoint(const tasep::InitialCondition& ic, double t, double u, std::size_t runs,
                                   std::uint64_t seed) {
  if (!(t > 0.0)) throw std::invalid_argument("TASEP time must be positive");
  tasep::Site site = 0;
  switch (ic.kind) {
    case tasep::InitialKind::kStep:
      site = tasep::step_site(t, u);
      break;
    case tasep::InitialKind::kFlat:
      site = tasep::flat_site(t, u);
      break;
    case tasep::InitialKind::kStationary:
      site = tasep::stationary_site(t, u, ic.rho);
      break;
  }
  const tasep::Window window = tasep::Window::for_horizon(t, site);
  const std::uint64_t ch = channel(tag_of("tasep-onepoint", ic, t, u));
  std::vector<double> out(runs);
  parallel_for(runs, [&](std::size_t r) {
    Engine rng = make_engine(seed, ch, r);
    tasep::ParticleSystem sys(ic, window, rng);
    sys.evolve(t, rng);
    switch (ic.kind) {
      case tasep::InitialKind::kStep:
        out[r] = tasep::rescale_step(sys, t, u);
        break;
      case tasep::InitialKind::kFlat:
        out[r] = tasep::rescale_flat(sys, t, u);
        break;
      case tasep::InitialKind::kStationary:
        out[r] = tasep::rescale_stationary(sys, t, u, ic.rho);
        break;
    }
  });
  return out;
}

std::vector<std::vector<double>> tasep_stationary_heights(double rho, std::span<const double> times, std::size_t runs,
                                                          std::uint64_t seed) {
  if (times.empty()) throw std::invalid_argument("need at least one time");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("times must be increasing");
  }
  const auto ic = tasep::InitialCondition::stationary(rho);
  tasep::Site reach = 0;
  for (double t : times) reach = std::max(reach, std::abs(tasep::stationary_site(t, 0.0, rho)));
  const tasep::Window window = tasep::Window::for_horizon(times.back(), reach);
  const std::uint64_t ch = channel(tag_of("tasep-stationary-heights", ic, times.back(), 0.0));
  std::vector<std::vector<double>> out(runs);
  parallel_for(runs, [&](std::size_t r) {
    Engine rng = make_engine(seed, ch, r);
    tasep::ParticleSystem sys(ic, window, rng);
    out[r].reserve(times.size());
    for (double t : times) {
      sys.evolve(t, rng);
      out[r].push_back(static_cast<double>(tasep::height(sys, tasep::stationary_site(t, 0.0, rho))));
    }
  });
  return out;
}

double rarefaction_density(double xi) {
  if (xi <= -1.0) return 1.0;
  if (xi >= 1.0) return 0.0;
  return 0.5 * (1.0 - xi);
}

std::vector<DensityPoint> tasep_density(double t, double bin_width, std::size_t runs, std::uint64_t seed) {
  if (runs == 0) throw std::invalid_argument("need at least one run");
  const auto ic = tasep::InitialCondition::step();
  const tasep::Window window = tasep::Window::for_horizon(t);
  const std::uint64_t ch = channel(tag_of("tasep-density", ic, t, bin_width));
  std::vector<std::vector<tasep::DensityBin>> per_run(runs);
  parallel_for(runs, [&](std::size_t r) {
    Engine rng = make_engine(seed, ch, r);
    tasep::ParticleSystem sys(ic, window, rng);
    sys.evolve(t, rng);
    per_run[r] = tasep::density_profile(sys, t, bin_width);
  });
  std::vector<tasep::DensityBin> pooled = per_run.front();
  for (std::size_t r = 1; r < runs; ++r) {
    for (std::size_t k = 0; k < pooled.size(); ++k) {
      pooled[k].sites += per_run[r][k].sites;
      pooled[k].occupied += per_run[r][k].occupied;
    }
  }
  std::vector<DensityPoint> out;
  out.reserve(pooled.size());
  for (const auto& b : pooled) {
    // Bin average of the piecewise-linear profile (exact for bins inside the fan).
    const double theory = 0.5 * (rarefaction_density(b.xi_lo) + rarefaction_density(b.xi_hi));
    out.push_back({b.xi_center(), b.density(), theory, b.sites});
  }
  return out;
}

std::vector<double> rmt_static(rmt::EnsembleKind kind, std::size_t n, std::size_t samples, std::uint64_t seed) {
  const std::uint64_t ch = channel(std::string(kind == rmt::EnsembleKind::kGUE ? "rmt-static/gue/N=" : "rmt-static/goe/N=") +
                                   std::to_string(n));
  std::vector<double> out(samples);
  parallel_for(samples, [&](std::size_t r) {
    Engine rng = make_engine(seed, ch, r);
    const rmt::MatrixState h = rmt::sample_stationary(kind, n, rng);
    out[r] = rmt::static_rescale(rmt::lambda_max(h), n);
  });
  return out;
}

std::vector<std::vector<double>> dbm_paths(rmt::EnsembleKind kind, std::size_t n, std::span<const double> u_grid,
                                           std::size_t paths, std::uint64_t seed) {
  const std::uint64_t ch = channel(std::string(kind == rmt::EnsembleKind::kGUE ? "dbm/gue/N=" : "dbm/goe/N=") +
                                   std::to_string(n));
  std::vector<std::vector<double>> out(paths);
  parallel_for(paths, [&](std::size_t r) {
    Engine rng = make_engine(seed, ch, r);
    out[r] = rmt::dbm_path(kind, n, u_grid, rng);
  });
  return out;
}

std::vector<stats::CovarianceEstimate> path_covariances(const std::vector<std::vector<double>>& paths,
                                                        std::span<const double> u_grid) {
  // 25 batches when there is room for them, never fewer than the minimum.
  const std::size_t batch = std::max<std::size_t>(2, paths.size() / 25);
  std::vector<stats::CovarianceEstimate> out;
  out.reserve(u_grid.size());
  for (std::size_t k = 0; k < u_grid.size(); ++k) out.push_back(stats::path_covariance(paths, k, u_grid[k], batch));
  return out;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(stop >= start)) throw std::invalid_argument("grid stop must not precede start");
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) g.push_back(start + static_cast<double>(k) * step);
  return g;
}

}  // namespace kpz::experiments
