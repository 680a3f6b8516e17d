#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kpz/rng.hpp"

namespace kpz::tasep {

using Site = std::int64_t;

// Closed lattice segment [lo, hi] containing the origin bond 0 -> 1.
class Window {
 public:
  // Throws std::invalid_argument unless lo < 0 < hi.
  Window(Site lo, Site hi);

  // Symmetric window large enough that nothing outside it can influence
  // sites |x| <= max_site up to time t: radius = max_site + ceil(t + 10 sqrt(t)) + 64.
  static Window for_horizon(double t, Site max_site = 0);

  Site lo() const { return lo_; }
  Site hi() const { return hi_; }
  std::size_t size() const { return static_cast<std::size_t>(hi_ - lo_ + 1); }
  bool contains(Site x) const { return x >= lo_ && x <= hi_; }

 private:
  Site lo_;
  Site hi_;
};

enum class InitialKind { kStep, kFlat, kStationary };

struct InitialCondition {
  InitialKind kind = InitialKind::kStep;
  double rho = 0.5;  // used by kStationary only

  static InitialCondition step() { return {InitialKind::kStep, 0.5}; }
  static InitialCondition flat() { return {InitialKind::kFlat, 0.5}; }
  // Throws std::invalid_argument unless 0 < rho < 1.
  static InitialCondition stationary(double rho);
};

std::string to_string(const InitialCondition& ic);

// Indexable set of sites with O(1) insert, erase and uniform sampling.
class MobileSet {
 public:
  MobileSet() = default;
  MobileSet(Site lo, std::size_t span);

  bool contains(Site x) const { return position_[index(x)] >= 0; }
  void insert(Site x);
  void erase(Site x);
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  Site at(std::size_t k) const { return members_[k]; }
  const std::vector<Site>& members() const { return members_; }

 private:
  std::size_t index(Site x) const { return static_cast<std::size_t>(x - lo_); }

  Site lo_ = 0;
  std::vector<Site> members_;
  std::vector<std::int32_t> position_;
};

enum class StepOutcome { kMoved, kJammed };

// Continuous-time TASEP on a finite window with closed boundaries.
class ParticleSystem {
 public:
  ParticleSystem(const InitialCondition& ic, const Window& window, Engine& rng);

  const Window& window() const { return window_; }
  const InitialCondition& initial_condition() const { return ic_; }
  double time() const { return time_; }
  std::int64_t passages() const { return passages_; }
  std::uint64_t events() const { return events_; }
  bool occupied(Site x) const { return occupation_[offset(x)] != 0; }
  const MobileSet& mobile() const { return mobile_; }
  std::size_t particle_count() const;

  // One Gillespie event: exponential holding time at total rate |mobile|,
  // then a uniformly chosen mobile particle jumps right.
  StepOutcome gillespie_step(Engine& rng);

  // Runs events until the next one would fall after t_end, then sets the
  // clock to t_end (memorylessness makes discarding the overshoot exact).
  // A jammed system idles to t_end. Throws if t_end < time().
  void evolve(double t_end, Engine& rng);

  // Recomputes the mobile set from the occupation; used by invariant checks.
  std::vector<Site> recompute_mobile() const;

  // Snapshot text, see docs/snapshot-format.md.
  std::string snapshot() const;
  static ParticleSystem from_snapshot(const std::string& text);

 private:
  ParticleSystem(const InitialCondition& ic, const Window& window);
  std::size_t offset(Site x) const { return static_cast<std::size_t>(x - window_.lo()); }
  void rebuild_mobile();
  void apply_jump(Site x);

  InitialCondition ic_;
  Window window_;
  std::vector<std::uint8_t> occupation_;
  MobileSet mobile_;
  double time_ = 0.0;
  std::int64_t passages_ = 0;
  std::uint64_t events_ = 0;
};

// h(x) = 2 N_t + sum_{y=1}^{x} (1 - 2 eta_y) for x >= 1, 2 N_t at 0,
// 2 N_t - sum_{y=x+1}^{0} (1 - 2 eta_y) for x <= -1.
// Throws std::out_of_range outside the window.
std::int64_t height(const ParticleSystem& sys, Site x);

struct HeightProfile {
  Site lo = 0;
  std::vector<std::int64_t> h;  // h[k] is the height at lo + k

  std::int64_t at(Site x) const { return h[static_cast<std::size_t>(x - lo)]; }
};

HeightProfile height_profile(const ParticleSystem& sys);

// Macroscopic step-IC profile: (1 + xi^2)/2 on |xi| <= 1, |xi| outside.
double limit_shape_step(double xi);

// v(u) = (1 - u^2)/2 for slopes |u| <= 1.
double growth_velocity(double slope);

// Characteristic speed 1 - 2 rho in the density frame.
double characteristic_speed(double rho);

// Nearest lattice site to a real position (ties away from zero).
Site nearest_site(double x);

// Rescaled heights, pure forms taking a measured h.
double rescale_step_value(double h, double t, double u);
double rescale_flat_value(double h, double t, double u);
double rescale_stationary_value(double h, double t, double rho);

// Measurement sites of the three rescalings.
Site step_site(double t, double u);
Site flat_site(double t, double u);
Site stationary_site(double t, double u, double rho);

// Rescalings of a system already evolved to time t. Throw std::out_of_range
// when the measurement site falls outside the window.
double rescale_step(const ParticleSystem& sys, double t, double u);
double rescale_flat(const ParticleSystem& sys, double t, double u);
double rescale_stationary(const ParticleSystem& sys, double t, double u, double rho);

struct DensityBin {
  double xi_lo = 0.0;
  double xi_hi = 0.0;
  std::size_t sites = 0;
  std::size_t occupied = 0;

  double xi_center() const { return 0.5 * (xi_lo + xi_hi); }
  double density() const { return sites == 0 ? 0.0 : static_cast<double>(occupied) / static_cast<double>(sites); }
};

// Occupation grouped in bins [k w, (k + 1) w) of xi = x / t over the window.
// Bins of repeated runs line up, so they can be summed across replicas.
std::vector<DensityBin> density_profile(const ParticleSystem& sys, double t, double bin_width);

}  // namespace kpz::tasep
