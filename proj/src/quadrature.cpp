#include "kpz/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace kpz::quadrature {
namespace {

struct Reference {
  std::vector<double> x, w;
};

// Nodes on [-1, 1] from Boost's nonnegative Legendre zeros, mirrored.
Reference compute_reference(std::size_t n) {
  Reference r;
  r.x.resize(n);
  r.w.resize(n);
  const int deg = static_cast<int>(n);
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(deg);
  // zeros ascend from 0 (odd n) or the smallest positive one
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const double z = zeros[k];
    const double dp = boost::math::legendre_p_prime(deg, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const std::size_t hi = n / 2 + k;
    r.x[hi] = z;
    r.w[hi] = w;
    r.x[n - 1 - hi] = -z;
    r.w[n - 1 - hi] = w;
  }
  return r;
}

const Reference& reference(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, Reference> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_reference(n)).first;
  return it->second;
}

}  // namespace

double Rule::integrate(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
  return acc;
}

Rule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  if (!(b > a)) throw std::invalid_argument("Gauss-Legendre interval must satisfy a < b");
  const Reference& ref = reference(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * ref.x[i];
    r.weights[i] = half * ref.w[i];
  }
  return r;
}

Rule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t per_panel) {
  if (panels == 0) throw std::invalid_argument("composite rule needs at least one panel");
  Rule r;
  r.nodes.reserve(panels * per_panel);
  r.weights.reserve(panels * per_panel);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const Rule piece = gauss_legendre(per_panel, a + h * static_cast<double>(p), a + h * static_cast<double>(p + 1));
    r.nodes.insert(r.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    r.weights.insert(r.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return r;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  // Boost stops on error <= rel * L1, so turn the absolute target into a
  // relative one from a single-panel estimate of the L1 norm.
  double l1 = 0.0;
  gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, nullptr, &l1);
  const double rel = std::max(tol / std::max(l1, tol), std::numeric_limits<double>::epsilon());
  return gauss_kronrod<double, 31>::integrate(f, a, b, 30, rel);
}

}  // namespace kpz::quadrature
