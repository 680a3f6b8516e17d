#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "kpz/quadrature.hpp"

namespace kpz::fredholm {

enum class ProcessKind { kAiry1, kAiry2 };

struct Cut {
  double u = 0.0;  // process time
  double s = 0.0;  // cutoff: the event {A(u) <= s}
};

// Ordered list of (time, cutoff) pairs with strictly increasing times.
class KernelCut {
 public:
  explicit KernelCut(std::vector<Cut> cuts);

  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  const Cut& operator[](std::size_t k) const { return cuts_[k]; }

 private:
  std::vector<Cut> cuts_;
};

inline constexpr std::size_t kMinNodes = 40;
inline constexpr double kMinMargin = 12.0;

// Discretization parameters: `nodes` Gauss-Legendre points per cut on
// [s_k, s_k + margin].
struct GridSpec {
  std::size_t nodes = 80;
  double margin = 16.0;
};

// Per-cut Nystrom rules. Throws std::invalid_argument when the spec is
// below kMinNodes / kMinMargin.
class QuadratureGrid {
 public:
  QuadratureGrid(const KernelCut& cuts, GridSpec spec = {});

  const GridSpec& spec() const { return spec_; }
  std::size_t cut_count() const { return rules_.size(); }
  std::size_t nodes_per_cut() const { return spec_.nodes; }
  double upper(std::size_t k) const { return rules_[k].nodes.empty() ? 0.0 : upper_[k]; }
  const quadrature::Rule& rule(std::size_t k) const { return rules_[k]; }

 private:
  GridSpec spec_;
  std::vector<quadrature::Rule> rules_;
  std::vector<double> upper_;
};

// Airy_1 extended kernel:
//   -(4 pi d)^{-1/2} exp(-(s'-s)^2 / 4d) 1(d > 0) + Ai(s + s' + d^2) exp(d (s + s') + 2 d^3 / 3),
// with d = u' - u.
double k1(double u, double s, double u2, double s2);

// Extended Airy kernel of the Airy_2 process, integrals evaluated by
// adaptive quadrature:
//   u >= u':   int_0^inf  e^{(u'-u) l} Ai(s + l) Ai(s' + l) dl
//   u <  u':  -int_-inf^0 e^{(u'-u) l} Ai(s + l) Ai(s' + l) dl
double k2(double u, double s, double u2, double s2);

// Full-line integral int_R e^{d l} Ai(x + l) Ai(y + l) dl for d > 0, in
// closed form.
double airy_heat_kernel(double d, double x, double y);

using Kernel = std::function<double(double u, double x, double u2, double y)>;

// det(I - [sqrt(w_i) K(u_a, x_i; u_b, y_j) sqrt(w_j)]) over the block grid.
// Throws std::runtime_error naming the offending entry if any is non-finite.
double fredholm_det(const Kernel& kernel, const KernelCut& cuts, const QuadratureGrid& grid);

// Same with the Airy_1 / Airy_2 kernels (Airy_2 blocks assembled through a
// shared lambda-quadrature factorization).
double fredholm_det(ProcessKind kind, const KernelCut& cuts, const QuadratureGrid& grid);

// P(A(0) <= s) for the given process. For Airy_1 this is F_1(2 s).
double one_point_cdf(ProcessKind kind, double s, GridSpec spec = {});

// Tracy-Widom CDFs on s in [-10, 6]; throws std::domain_error outside.
double f2(double s, GridSpec spec = {});
double f1(double s, GridSpec spec = {});

// P(A(u1) <= s1, A(u2) <= s2). Equal times reduce to the one-point CDF at
// min(s1, s2); the pair is reordered if u1 > u2.
double joint_cdf(ProcessKind kind, Cut first, Cut second, GridSpec spec = {});

struct DistributionMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Integration box in the process's own units. Airy_2 uses [-10, 6]; Airy_1,
// whose one-point law is s -> F_1(2 s), uses [-5, 4] (F_1 on [-10, 8]; the
// upper tail of F_1 is heavier than that of F_2).
struct Box {
  double lo = 0.0;
  double hi = 0.0;
};
Box default_box(ProcessKind kind);

struct MomentOptions {
  GridSpec grid{};
  Box box{};                  // lo == hi selects default_box(kind)
  std::size_t panels = 16;    // Gauss-Legendre panels on each side of 0
  std::size_t per_panel = 8;
};

// Mean and variance of the one-point law by integration by parts over the box.
DistributionMoments one_point_moments(ProcessKind kind, const MomentOptions& options = {});

// Moments of F_2 and of F_1 themselves (beta = 2 or 1), over [-10, 6] and
// [-10, 8] respectively.
DistributionMoments tracy_widom_moments(int beta, const MomentOptions& options = {});

struct CovarianceOptions {
  GridSpec grid{};
  Box box{};                  // lo == hi selects default_box(kind)
  double panel_length = 2.0;  // tensor Gauss-Legendre panels in (s1, s2)
  std::size_t per_panel = 8;
  double prune = 1e-13;       // skip points where min(F, 1 - F) bounds the integrand below this
};

// Cov(A(u), A(0)) via the Hoeffding identity over box^2. u = 0 returns the
// one-point variance.
double covariance(ProcessKind kind, double u, const CovarianceOptions& options = {});

}  // namespace kpz::fredholm
