#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "kpz/rng.hpp"
#include "kpz/stats.hpp"

using namespace kpz;
using namespace kpz::stats;

TEST_CASE("ECDF") {
  const EmpiricalDistribution d({3.0, 1.0, 2.0});
  CHECK(d.ecdf(2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(ecdf(d, 0.5) == 0.0);
  CHECK(d.ecdf(3.5) == 1.0);
  CHECK_THROWS_AS(EmpiricalDistribution({}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalDistribution({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("KS distance") {
  const EmpiricalDistribution d({0.1, 0.4, 0.4, 0.9});
  CHECK(ks_distance(d, [&](double s) { return d.ecdf(s); }) == doctest::Approx(0.0));
  const EmpiricalDistribution one({0.0});
  const double ks = ks_distance(one, [](double s) { return 0.5 * std::erfc(-s / std::sqrt(2.0)); });
  CHECK(ks == doctest::Approx(0.5).epsilon(1e-15));

  Engine rng = make_engine(1, 0, 0);
  std::uniform_real_distribution<double> u;
  std::vector<double> x(10000);
  for (auto& v : x) v = u(rng);
  const double critical = 1.358 / std::sqrt(10000.0);
  CHECK(ks_distance(EmpiricalDistribution(x), [](double s) { return std::clamp(s, 0.0, 1.0); }) < critical);
}

TEST_CASE("moments") {
  const auto m = moments(std::vector<double>{-1.0, 1.0});
  CHECK(m.mean == 0.0);
  CHECK(m.variance == 2.0);
  CHECK(moments(std::vector<double>{4.0, 4.0, 4.0}).variance == 0.0);
  CHECK_THROWS_AS(moments(std::vector<double>{1.0}), std::invalid_argument);

  Engine rng = make_engine(2, 0, 0);
  std::normal_distribution<double> z;
  std::vector<double> x(100000);
  for (auto& v : x) v = z(rng);
  const auto g = moments(x);
  CHECK(std::abs(g.variance - 1.0) < 3 * g.variance_stderr);
  // jackknife error of the variance of a normal sample is about sqrt(2 / n)
  CHECK(g.variance_stderr == doctest::Approx(std::sqrt(2.0 / 100000)).epsilon(0.05));
  CHECK(g.mean_stderr == doctest::Approx(std::sqrt(1.0 / 100000)).epsilon(0.02));
}

TEST_CASE("path covariance") {
  Engine rng = make_engine(3, 0, 0);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> paths(4000);
  for (auto& p : paths) {
    const double a = z(rng);
    p = {a, z(rng), a};
  }
  const auto var = path_covariance(paths, 0, 0.0, 100);
  std::vector<double> first;
  for (const auto& p : paths) first.push_back(p[0]);
  CHECK(var.value == doctest::Approx(moments(first).variance).epsilon(1e-12));
  CHECK(var.batches == 40);

  const auto indep = path_covariance(paths, 1, 1.0, 100);
  CHECK(std::abs(indep.value) < 3 * indep.stderr);
  const auto dup = path_covariance(paths, 2, 2.0, 100);
  CHECK(dup.value == var.value);
  CHECK(dup.u == 2.0);

  CHECK_THROWS_AS(path_covariance(paths, 0, 0.0, 1000), std::invalid_argument);
  CHECK_THROWS_AS(path_covariance(paths, 0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("line fit") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_stderr == doctest::Approx(0.0));
  CHECK(covariance(x, y) == doctest::Approx(2.0 * covariance(x, x)));
}

TEST_CASE("stream seeds") {
  CHECK(stream_seed(1, 2, 3) == stream_seed(1, 2, 3));
  CHECK(stream_seed(1, 2, 3) != stream_seed(1, 2, 4));
  CHECK(stream_seed(1, 2, 3) != stream_seed(1, 3, 3));
  CHECK(stream_seed(1, 2, 3) != stream_seed(2, 2, 3));
}
