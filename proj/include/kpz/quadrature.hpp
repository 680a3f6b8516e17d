#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kpz::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
};

// n-point Gauss-Legendre rule on [a, b]. Nodes ascending, strictly inside.
Rule gauss_legendre(std::size_t n, double a, double b);

// `panels` equal panels on [a, b], each carrying a `per_panel`-point rule.
Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t per_panel);

// Adaptive Gauss-Kronrod (Boost.Math), to absolute tolerance `tol`.
double adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace kpz::quadrature
