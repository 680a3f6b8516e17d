#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kpz/quadrature.hpp"

using namespace kpz;

TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2n - 1") {
  const auto rule = quadrature::gauss_legendre(6, -1.0, 2.0);
  // int_{-1}^{2} x^11 dx = (2^12 - 1) / 12
  CHECK(rule.integrate([](double x) { return std::pow(x, 11); }) == doctest::Approx(4095.0 / 12.0).epsilon(1e-13));
  CHECK(rule.integrate([](double) { return 1.0; }) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("nodes ascend strictly inside the interval") {
  for (std::size_t n : {1u, 2u, 7u, 80u, 160u}) {
    const auto rule = quadrature::gauss_legendre(n, 2.0, 5.0);
    REQUIRE(rule.size() == n);
    CHECK(rule.nodes.front() > 2.0);
    CHECK(rule.nodes.back() < 5.0);
    for (std::size_t i = 1; i < n; ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    double total = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(3.0).epsilon(1e-13));
  }
}

TEST_CASE("composite rule integrates a Gaussian") {
  const auto rule = quadrature::composite_gauss_legendre(-12.0, 12.0, 24, 8);
  CHECK(rule.size() == 192);
  const double v = rule.integrate([](double x) { return std::exp(-x * x); });
  CHECK(std::abs(v - std::sqrt(std::numbers::pi)) < 1e-12);
}

TEST_CASE("adaptive quadrature meets an absolute tolerance") {
  const double v = quadrature::adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(v - 2.0 / 3.0) < 1e-11);
  const double w = quadrature::adaptive([](double x) { return std::cos(40 * x); }, 0.0, 3.0, 1e-13);
  CHECK(std::abs(w - std::sin(120.0) / 40.0) < 1e-12);
}
