#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "kpz/stats.hpp"
#include "kpz/tasep.hpp"

using namespace kpz;
using namespace kpz::tasep;

namespace {

std::vector<int> occupation(const ParticleSystem& sys) {
  std::vector<int> eta;
  for (Site x = sys.window().lo(); x <= sys.window().hi(); ++x) eta.push_back(sys.occupied(x) ? 1 : 0);
  return eta;
}

// Window [lo, hi] with particles exactly at `sites`.
ParticleSystem custom(Site lo, Site hi, const std::vector<Site>& sites) {
  std::string rle = "rle";
  std::vector<int> eta(static_cast<std::size_t>(hi - lo + 1), 0);
  for (Site x : sites) eta[static_cast<std::size_t>(x - lo)] = 1;
  rle += " " + std::to_string(eta.front());
  std::size_t run = 0;
  int current = eta.front();
  for (int v : eta) {
    if (v == current) {
      ++run;
    } else {
      rle += " " + std::to_string(run);
      current = v;
      run = 1;
    }
  }
  rle += " " + std::to_string(run);
  return ParticleSystem::from_snapshot("tasep-snapshot 1\nic step\nwindow " + std::to_string(lo) + " " +
                                       std::to_string(hi) + "\ntime 0x0p+0\npassages 0\nevents 0\n" + rle + "\n");
}

}  // namespace

TEST_CASE("windows must straddle the origin") {
  CHECK_THROWS_AS(Window(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(Window(-5, 0), std::invalid_argument);
  const auto w = Window::for_horizon(100.0, 7);
  CHECK(w.hi() == 7 + 100 + 100 + 64);
  CHECK(w.lo() == -w.hi());
}

TEST_CASE("initial conditions") {
  Engine rng = make_engine(1, 0, 0);
  CHECK(occupation(ParticleSystem(InitialCondition::step(), Window(-5, 5), rng)) ==
        std::vector<int>{1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0});
  CHECK(occupation(ParticleSystem(InitialCondition::flat(), Window(-2, 2), rng)) == std::vector<int>{1, 0, 1, 0, 1});
  CHECK_THROWS_AS(InitialCondition::stationary(1.0), std::invalid_argument);
  const ParticleSystem bern(InitialCondition::stationary(0.5), Window(-500000, 499999), rng);
  const double density = static_cast<double>(bern.particle_count()) / 1e6;
  CHECK(std::abs(density - 0.5) < 3e-3);
}

TEST_CASE("mobile sets of the deterministic initial conditions") {
  Engine rng = make_engine(2, 0, 0);
  const ParticleSystem step(InitialCondition::step(), Window(-5, 5), rng);
  CHECK(step.mobile().size() == 1);
  CHECK(step.mobile().at(0) == 0);
  const ParticleSystem flat(InitialCondition::flat(), Window(-2, 2), rng);
  // particle at hi is blocked by the closed boundary
  CHECK(flat.mobile().size() == 2);
  CHECK(flat.mobile().contains(-2));
  CHECK(flat.mobile().contains(0));
}

TEST_CASE("a single particle makes a forced move") {
  auto sys = custom(-3, 3, {0});
  Engine rng = make_engine(3, 0, 0);
  CHECK(sys.gillespie_step(rng) == StepOutcome::kMoved);
  CHECK(sys.occupied(1));
  CHECK_FALSE(sys.occupied(0));
  CHECK(sys.passages() == 1);
  CHECK(sys.time() > 0.0);
}

TEST_CASE("a jammed system idles") {
  auto sys = custom(-3, 3, {2, 3});
  Engine rng = make_engine(4, 0, 0);
  CHECK(sys.gillespie_step(rng) == StepOutcome::kJammed);
  sys.evolve(5.0, rng);
  CHECK(sys.time() == 5.0);
  CHECK(sys.events() == 0);
}

TEST_CASE("mobile set tracks the occupation under random events") {
  Engine rng = make_engine(5, 0, 0);
  ParticleSystem sys(InitialCondition::stationary(0.4), Window(-200, 200), rng);
  for (int k = 0; k < 100000; ++k) {
    if (sys.gillespie_step(rng) == StepOutcome::kJammed) break;
    if (k % 997 == 0) {
      const auto expected = sys.recompute_mobile();
      auto members = sys.mobile().members();
      std::sort(members.begin(), members.end());
      REQUIRE(members == expected);
    }
  }
  auto members = sys.mobile().members();
  std::sort(members.begin(), members.end());
  CHECK(members == sys.recompute_mobile());
}

TEST_CASE("MobileSet insert and erase") {
  MobileSet set(-10, 21);
  for (Site x : {-10, 3, 7, 10}) set.insert(x);
  set.insert(3);
  CHECK(set.size() == 4);
  set.erase(-10);
  set.erase(-10);
  CHECK(set.size() == 3);
  CHECK_FALSE(set.contains(-10));
  std::set<Site> got(set.members().begin(), set.members().end());
  CHECK(got == std::set<Site>{3, 7, 10});
}

TEST_CASE("evolving to the current time changes nothing") {
  Engine rng = make_engine(6, 0, 0);
  ParticleSystem sys(InitialCondition::flat(), Window(-50, 50), rng);
  sys.evolve(3.0, rng);
  const auto before = sys.snapshot();
  sys.evolve(3.0, rng);
  CHECK(sys.snapshot() == before);
  CHECK_THROWS_AS(sys.evolve(2.0, rng), std::invalid_argument);
}

TEST_CASE("a lone particle performs a Poisson walk") {
  const std::size_t reps = 4000;
  std::vector<double> moves(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    auto sys = custom(-1, 200, {0});
    Engine rng = make_engine(7, 0, r);
    sys.evolve(10.0, rng);
    moves[r] = static_cast<double>(sys.events());
  }
  const auto m = stats::moments(moves);
  CHECK(std::abs(m.mean - 10.0) < 3 * m.mean_stderr);
  CHECK(std::abs(m.variance - 10.0) < 3 * m.variance_stderr);
}

TEST_CASE("step current: 2 N_t / t tends to 1/2") {
  const std::size_t reps = 1000;
  const double t = 1000.0;
  std::vector<double> ratio(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    Engine rng = make_engine(8, 0, r);
    ParticleSystem sys(InitialCondition::step(), Window::for_horizon(t), rng);
    sys.evolve(t, rng);
    ratio[r] = 2.0 * static_cast<double>(sys.passages()) / t;
  }
  const auto m = stats::moments(ratio);
  // h = t/2 - (t/2)^{1/3} chi with E chi = -1.77: a +1.4e-2 correction at t = 1000
  MESSAGE("mean " << m.mean << " stderr " << m.mean_stderr);
  const double corrected = 0.5 + 1.7711 * std::cbrt(t / 2) / t;
  CHECK(std::abs(m.mean - corrected) < 3 * m.mean_stderr + 2e-3);
  CHECK(std::abs(m.mean - 0.5) < 0.02);
}

TEST_CASE("step current matches exponential last-passage percolation") {
  // Particle k of the step IC crosses bond 0 -> 1 at its k-th jump, at time
  // G(k, k) = max(G(k - 1, k), G(k, k - 1)) + Exp(1); so N_t = max{n : G(n, n) <= t}.
  const std::size_t reps = 3000;
  const double t = 60.0;
  const int n = 60;
  std::vector<double> sim(reps), lpp(reps);
  std::vector<double> g((n + 1) * (n + 1));
  for (std::size_t r = 0; r < reps; ++r) {
    Engine rng = make_engine(13, 0, r);
    ParticleSystem sys(InitialCondition::step(), Window::for_horizon(t), rng);
    sys.evolve(t, rng);
    sim[r] = static_cast<double>(sys.passages());

    Engine other = make_engine(13, 1, r);
    std::exponential_distribution<double> w;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) g[i * (n + 1) + j] = std::max(g[(i - 1) * (n + 1) + j], g[i * (n + 1) + j - 1]) + w(other);
    int count = 0;
    while (count < n && g[(count + 1) * (n + 1) + count + 1] <= t) ++count;
    REQUIRE(count < n);
    lpp[r] = count;
  }
  const auto a = stats::moments(sim), b = stats::moments(lpp);
  CHECK(std::abs(a.mean - b.mean) < 3 * std::hypot(a.mean_stderr, b.mean_stderr));
  CHECK(std::abs(a.variance - b.variance) < 3 * std::hypot(a.variance_stderr, b.variance_stderr));
  // two-sample KS at the 1% level
  const stats::EmpiricalDistribution da(sim), db(lpp);
  CHECK(stats::ks_distance(da, [&](double s) { return db.ecdf(s); }) < 1.63 * std::sqrt(2.0 / reps));
}

TEST_CASE("height function") {
  Engine rng = make_engine(9, 0, 0);
  const ParticleSystem step(InitialCondition::step(), Window(-6, 6), rng);
  for (Site x = -6; x <= 6; ++x) CHECK(height(step, x) == std::abs(x));
  const ParticleSystem flat(InitialCondition::flat(), Window(-6, 6), rng);
  for (Site x = -6; x <= 6; ++x) CHECK(height(flat, x) == (x % 2 == 0 ? 0 : 1));
  CHECK_THROWS_AS(height(step, 7), std::out_of_range);

  ParticleSystem sys(InitialCondition::stationary(0.5), Window(-100, 100), rng);
  sys.evolve(20.0, rng);
  const auto profile = height_profile(sys);
  CHECK(profile.at(0) == 2 * sys.passages());
  for (Site x = -99; x <= 100; ++x) {
    CHECK(profile.at(x) == height(sys, x));
    CHECK(profile.at(x) - profile.at(x - 1) == (sys.occupied(x) ? -1 : 1));
  }
}

TEST_CASE("macroscopic shape and velocity") {
  CHECK(limit_shape_step(0.0) == 0.5);
  CHECK(limit_shape_step(1.0) == 1.0);
  CHECK(limit_shape_step(-1.0) == 1.0);
  CHECK(limit_shape_step(2.0) == 2.0);
  CHECK(growth_velocity(0.0) == 0.5);
  CHECK(growth_velocity(1.0) == 0.0);
  CHECK(growth_velocity(-1.0) == 0.0);
  CHECK_THROWS_AS(growth_velocity(1.5), std::invalid_argument);
  CHECK(characteristic_speed(0.5) == 0.0);
}

TEST_CASE("rescaling arithmetic") {
  const double t = 500.0, u = 0.7;
  CHECK(std::abs(rescale_step_value(t / 2 + u * u * std::cbrt(t / 2), t, u)) < 1e-12);
  CHECK(rescale_step_value(3.0, 2.0, 0.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(rescale_flat_value(t / 2, t, 0.0) == 0.0);
  CHECK(rescale_flat_value(2.0, 1.0, 0.0) == doctest::Approx(-1.5).epsilon(1e-15));
  const double rho = 0.3;
  CHECK(std::abs(rescale_stationary_value((1 - 2 * rho * (1 - rho)) * t, t, rho)) < 1e-12);
  CHECK(stationary_site(1000.0, 0.0, 0.5) == 0);
  CHECK(stationary_site(1000.0, 0.5, 0.5) == nearest_site(0.5 * 100.0));
  CHECK(nearest_site(-2.5) == -3);
}

TEST_CASE("density bins line up and count every site") {
  Engine rng = make_engine(10, 0, 0);
  ParticleSystem sys(InitialCondition::step(), Window(-300, 300), rng);
  sys.evolve(100.0, rng);
  const auto bins = density_profile(sys, 100.0, 0.1);
  std::size_t sites = 0, occupied = 0;
  for (const auto& b : bins) {
    sites += b.sites;
    occupied += b.occupied;
    CHECK(std::abs(b.xi_hi - b.xi_lo - 0.1) < 1e-12);
    CHECK(std::abs(std::round(b.xi_lo / 0.1) * 0.1 - b.xi_lo) < 1e-12);
  }
  CHECK(sites == sys.window().size());
  CHECK(occupied == sys.particle_count());
  for (const auto& b : bins) {
    if (b.xi_hi <= -1.0 - 0.1) CHECK(b.density() == 1.0);
    if (b.xi_lo >= 1.0 + 0.5) CHECK(b.density() == 0.0);
  }
}

TEST_CASE("identical seeds give identical trajectories") {
  auto run = [](std::uint64_t seed) {
    Engine rng = make_engine(seed, 3, 0);
    ParticleSystem sys(InitialCondition::stationary(0.5), Window(-300, 300), rng);
    sys.evolve(50.0, rng);
    return sys.snapshot();
  };
  CHECK(run(11) == run(11));
  CHECK(run(11) != run(12));
}

TEST_CASE("snapshot round trip") {
  Engine rng = make_engine(12, 0, 0);
  ParticleSystem sys(InitialCondition::stationary(0.25), Window(-100, 120), rng);
  sys.evolve(7.5, rng);
  const auto text = sys.snapshot();
  const auto back = ParticleSystem::from_snapshot(text);
  CHECK(back.snapshot() == text);
  CHECK(back.time() == sys.time());
  CHECK(back.passages() == sys.passages());
  CHECK(back.initial_condition().rho == 0.25);
  CHECK(back.recompute_mobile() == sys.recompute_mobile());
  CHECK_THROWS_AS(ParticleSystem::from_snapshot("tasep-snapshot 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(ParticleSystem::from_snapshot(text.substr(0, text.size() - 4)), std::invalid_argument);
}
