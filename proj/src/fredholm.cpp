#include "kpz/fredholm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpz/airy.hpp"
#include "kpz/parallel.hpp"

namespace kpz::fredholm {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Ai vanishes below double resolution long before the supported range ends,
// so arguments past it contribute exactly nothing.
double ai_tail(double x) { return x > airy::kMaxArg ? 0.0 : airy::ai(x); }

// lambda-quadrature density (nodes per unit length) for the Airy products;
// the negative branch reaches Ai(-30), whose oscillation is faster.
constexpr std::size_t kPositivePanelNodes = 12;
constexpr std::size_t kNegativePanelNodes = 16;
// e^{-40} ~ 4e-18 bounds the dropped part of the negative-branch integral.
constexpr double kDecayExponent = 40.0;
constexpr double kTailTolerance = 1e-20;

struct CutNodes {
  double s = 0.0;
  std::vector<double> x;
  VectorXd sqrt_w;
};

CutNodes make_nodes(const quadrature::Rule& rule, double s) {
  CutNodes c;
  c.s = s;
  c.x = rule.nodes;
  c.sqrt_w.resize(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) c.sqrt_w[static_cast<Eigen::Index>(i)] = std::sqrt(rule.weights[i]);
  return c;
}

CutNodes make_nodes(double s, const GridSpec& spec) {
  return make_nodes(quadrature::gauss_legendre(spec.nodes, s, s + spec.margin), s);
}

// Smallest integer Lambda with e^{growth Lambda} Ai(s_min + Lambda)^2 below
// the tail tolerance (and past the oscillatory region).
double positive_cutoff(double s_min, double growth) {
  for (int L = 1; L < 400; ++L) {
    const double z = s_min + L;
    if (z < 1.0) continue;
    if (z > airy::kMaxArg) return L;
    const double a = airy::ai(z);
    if (std::exp(growth * L) * a * a < kTailTolerance) return L;
  }
  throw std::runtime_error("extended Airy kernel: no lambda cutoff found");
}

quadrature::Rule positive_rule(double s_min, double growth) {
  const double cutoff = positive_cutoff(s_min, growth);
  return quadrature::composite_gauss_legendre(0.0, cutoff, static_cast<std::size_t>(cutoff), kPositivePanelNodes);
}

double negative_cutoff(double d) { return -kDecayExponent / d; }

// The negative branch is integrated directly when every Ai argument stays in
// the supported range; otherwise it is rewritten through the full-line
// closed form.
bool direct_negative_ok(double s_min, double d) { return s_min + negative_cutoff(d) >= airy::kMinArg; }

quadrature::Rule negative_rule(double d) {
  const double lo = negative_cutoff(d);
  const auto panels = static_cast<std::size_t>(std::ceil(-lo));
  return quadrature::composite_gauss_legendre(lo, 0.0, std::max<std::size_t>(panels, 1), kNegativePanelNodes);
}

// Rows: sqrt(w_i) Ai(x_i + lambda_l).
MatrixXd airy_factor(const CutNodes& c, const quadrature::Rule& lambda) {
  const auto n = static_cast<Eigen::Index>(c.x.size());
  const auto L = static_cast<Eigen::Index>(lambda.size());
  MatrixXd f(n, L);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = 0; l < L; ++l) {
      f(i, l) = c.sqrt_w[i] * ai_tail(c.x[static_cast<std::size_t>(i)] + lambda.nodes[static_cast<std::size_t>(l)]);
    }
  }
  return f;
}

VectorXd lambda_weights(const quadrature::Rule& lambda, double d) {
  VectorXd w(static_cast<Eigen::Index>(lambda.size()));
  for (std::size_t l = 0; l < lambda.size(); ++l) {
    w[static_cast<Eigen::Index>(l)] = lambda.weights[l] * std::exp(d * lambda.nodes[l]);
  }
  return w;
}

MatrixXd heat_block(const CutNodes& a, const CutNodes& b, double d) {
  MatrixXd g(static_cast<Eigen::Index>(a.x.size()), static_cast<Eigen::Index>(b.x.size()));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      g(i, j) = a.sqrt_w[i] * airy_heat_kernel(d, a.x[static_cast<std::size_t>(i)], b.x[static_cast<std::size_t>(j)]) *
                b.sqrt_w[j];
    }
  }
  return g;
}

// Weighted Airy_2 block K(u_a, .; u_b, .) with d = u_b - u_a.
MatrixXd airy2_block(const CutNodes& a, const CutNodes& b, double d, const quadrature::Rule& pos,
                     const MatrixXd& fa, const MatrixXd& fb) {
  if (d <= 0.0) return fa * lambda_weights(pos, d).asDiagonal() * fb.transpose();
  const double s_min = std::min(a.s, b.s);
  if (direct_negative_ok(s_min, d)) {
    const quadrature::Rule neg = negative_rule(d);
    return -(airy_factor(a, neg) * lambda_weights(neg, d).asDiagonal() * airy_factor(b, neg).transpose());
  }
  const quadrature::Rule ext = positive_rule(s_min, d);
  return airy_factor(a, ext) * lambda_weights(ext, d).asDiagonal() * airy_factor(b, ext).transpose() -
         heat_block(a, b, d);
}

MatrixXd airy1_block(const CutNodes& a, const CutNodes& b, double ua, double ub) {
  MatrixXd k(static_cast<Eigen::Index>(a.x.size()), static_cast<Eigen::Index>(b.x.size()));
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      k(i, j) = a.sqrt_w[i] * k1(ua, a.x[static_cast<std::size_t>(i)], ub, b.x[static_cast<std::size_t>(j)]) * b.sqrt_w[j];
    }
  }
  return k;
}

void check_finite(const MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        std::ostringstream os;
        os << "Fredholm matrix entry (" << i << ", " << j << ") is not finite: " << m(i, j);
        throw std::runtime_error(os.str());
      }
    }
  }
}

// det(I - K) for the assembled weighted matrix.
double identity_minus_det(MatrixXd k) {
  check_finite(k);
  k = MatrixXd::Identity(k.rows(), k.cols()) - k;
  return Eigen::PartialPivLU<MatrixXd>(k).determinant();
}

// det(I - A) - 1. For small A, eliminate on A itself with pivots 1 - a_kk so
// the leading 1 never has to be subtracted back out; otherwise plain LU.
double det_identity_minus_one(const MatrixXd& a) {
  const Eigen::Index n = a.rows();
  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) norm = std::max(norm, a.row(i).cwiseAbs().sum());
  if (norm >= 0.5) {
    return Eigen::PartialPivLU<MatrixXd>(MatrixXd::Identity(n, n) - a).determinant() - 1.0;
  }
  MatrixXd b = -a;  // I - A = I + B
  double log_det = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pivot = 1.0 + b(k, k);
    log_det += std::log1p(b(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double l = b(i, k) / pivot;
      if (l == 0.0) continue;
      b.row(i).tail(n - k - 1) -= l * b.row(k).tail(n - k - 1);
    }
  }
  return std::expm1(log_det);
}

std::vector<CutNodes> grid_nodes(const KernelCut& cuts, const QuadratureGrid& grid) {
  std::vector<CutNodes> out;
  out.reserve(cuts.size());
  for (std::size_t k = 0; k < cuts.size(); ++k) out.push_back(make_nodes(grid.rule(k), cuts[k].s));
  return out;
}

MatrixXd place_blocks(const std::vector<std::vector<MatrixXd>>& blocks) {
  Eigen::Index total = 0;
  for (const auto& row : blocks) total += row.front().rows();
  MatrixXd m(total, total);
  Eigen::Index r0 = 0;
  for (const auto& row : blocks) {
    Eigen::Index c0 = 0;
    for (const auto& blk : row) {
      m.block(r0, c0, blk.rows(), blk.cols()) = blk;
      c0 += blk.cols();
    }
    r0 += row.front().rows();
  }
  return m;
}

Box resolve_box(ProcessKind kind, Box box) { return box.lo == box.hi ? default_box(kind) : box; }

}  // namespace

KernelCut::KernelCut(std::vector<Cut> cuts) : cuts_(std::move(cuts)) {
  if (cuts_.empty()) throw std::invalid_argument("kernel cut needs at least one (u, s) pair");
  for (std::size_t k = 0; k < cuts_.size(); ++k) {
    if (!std::isfinite(cuts_[k].u) || !std::isfinite(cuts_[k].s)) throw std::invalid_argument("kernel cut must be finite");
    if (k > 0 && !(cuts_[k].u > cuts_[k - 1].u)) throw std::invalid_argument("kernel cut times must be strictly increasing");
  }
}

QuadratureGrid::QuadratureGrid(const KernelCut& cuts, GridSpec spec) : spec_(spec) {
  if (spec.nodes < kMinNodes) {
    throw std::invalid_argument("quadrature grid needs at least " + std::to_string(kMinNodes) + " nodes per cut");
  }
  if (!(spec.margin >= kMinMargin)) {
    throw std::invalid_argument("quadrature truncation must extend at least 12 beyond each cutoff");
  }
  for (const Cut& c : cuts.cuts()) {
    rules_.push_back(quadrature::gauss_legendre(spec.nodes, c.s, c.s + spec.margin));
    upper_.push_back(c.s + spec.margin);
  }
}

double k1(double u, double s, double u2, double s2) {
  const double d = u2 - u;
  const double z = s + s2 + d * d;
  double value = 0.0;
  const double a = ai_tail(z);
  if (a != 0.0) value = a * std::exp(d * (s + s2) + 2.0 / 3.0 * d * d * d);
  if (d > 0.0) {
    const double diff = s2 - s;
    value -= std::exp(-diff * diff / (4.0 * d)) / std::sqrt(4.0 * std::numbers::pi * d);
  }
  return value;
}

double airy_heat_kernel(double d, double x, double y) {
  if (!(d > 0.0)) throw std::invalid_argument("airy_heat_kernel needs d > 0");
  const double diff = x - y;
  return std::exp(d * d * d / 12.0 - d * (x + y) / 2.0 - diff * diff / (4.0 * d)) /
         std::sqrt(4.0 * std::numbers::pi * d);
}

double k2(double u, double s, double u2, double s2) {
  const double d = u2 - u;
  const double s_min = std::min(s, s2);
  auto integrand = [&](double l) { return std::exp(d * l) * ai_tail(s + l) * ai_tail(s2 + l); };
  constexpr double tol = 1e-13;
  if (d <= 0.0) return quadrature::adaptive(integrand, 0.0, positive_cutoff(s_min, 0.0), tol);
  if (direct_negative_ok(s_min, d)) return -quadrature::adaptive(integrand, negative_cutoff(d), 0.0, tol);
  return quadrature::adaptive(integrand, 0.0, positive_cutoff(s_min, d), tol) - airy_heat_kernel(d, s, s2);
}

double fredholm_det(const Kernel& kernel, const KernelCut& cuts, const QuadratureGrid& grid) {
  const std::vector<CutNodes> nodes = grid_nodes(cuts, grid);
  std::vector<std::vector<MatrixXd>> blocks(cuts.size(), std::vector<MatrixXd>(cuts.size()));
  for (std::size_t a = 0; a < cuts.size(); ++a) {
    for (std::size_t b = 0; b < cuts.size(); ++b) {
      MatrixXd& blk = blocks[a][b];
      blk.resize(static_cast<Eigen::Index>(nodes[a].x.size()), static_cast<Eigen::Index>(nodes[b].x.size()));
      for (Eigen::Index i = 0; i < blk.rows(); ++i) {
        for (Eigen::Index j = 0; j < blk.cols(); ++j) {
          blk(i, j) = nodes[a].sqrt_w[i] *
                      kernel(cuts[a].u, nodes[a].x[static_cast<std::size_t>(i)], cuts[b].u,
                             nodes[b].x[static_cast<std::size_t>(j)]) *
                      nodes[b].sqrt_w[j];
        }
      }
    }
  }
  return identity_minus_det(place_blocks(blocks));
}

double fredholm_det(ProcessKind kind, const KernelCut& cuts, const QuadratureGrid& grid) {
  const std::vector<CutNodes> nodes = grid_nodes(cuts, grid);
  const std::size_t m = cuts.size();
  std::vector<std::vector<MatrixXd>> blocks(m, std::vector<MatrixXd>(m));
  if (kind == ProcessKind::kAiry1) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) blocks[a][b] = airy1_block(nodes[a], nodes[b], cuts[a].u, cuts[b].u);
    }
    return identity_minus_det(place_blocks(blocks));
  }
  double s_min = cuts[0].s;
  for (const Cut& c : cuts.cuts()) s_min = std::min(s_min, c.s);
  const quadrature::Rule pos = positive_rule(s_min, 0.0);
  std::vector<MatrixXd> factors;
  factors.reserve(m);
  for (const CutNodes& c : nodes) factors.push_back(airy_factor(c, pos));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      blocks[a][b] = airy2_block(nodes[a], nodes[b], cuts[b].u - cuts[a].u, pos, factors[a], factors[b]);
    }
  }
  return identity_minus_det(place_blocks(blocks));
}

double one_point_cdf(ProcessKind kind, double s, GridSpec spec) {
  const KernelCut cut({{0.0, s}});
  return fredholm_det(kind, cut, QuadratureGrid(cut, spec));
}

double f2(double s, GridSpec spec) {
  if (!(s >= -10.0 && s <= 6.0)) throw std::domain_error("F2 argument outside [-10, 6]");
  return one_point_cdf(ProcessKind::kAiry2, s, spec);
}

double f1(double s, GridSpec spec) {
  if (!(s >= -10.0 && s <= 6.0)) throw std::domain_error("F1 argument outside [-10, 6]");
  return one_point_cdf(ProcessKind::kAiry1, 0.5 * s, spec);
}

double joint_cdf(ProcessKind kind, Cut first, Cut second, GridSpec spec) {
  if (first.u == second.u) return one_point_cdf(kind, std::min(first.s, second.s), spec);
  if (first.u > second.u) std::swap(first, second);
  const KernelCut cuts({first, second});
  return fredholm_det(kind, cuts, QuadratureGrid(cuts, spec));
}

Box default_box(ProcessKind kind) { return kind == ProcessKind::kAiry2 ? Box{-10.0, 6.0} : Box{-5.0, 4.0}; }

DistributionMoments one_point_moments(ProcessKind kind, const MomentOptions& options) {
  const Box box = resolve_box(kind, options.box);
  if (!(box.lo < 0.0 && box.hi > 0.0)) throw std::invalid_argument("moment box must contain 0");
  const quadrature::Rule left = quadrature::composite_gauss_legendre(box.lo, 0.0, options.panels, options.per_panel);
  const quadrature::Rule right = quadrature::composite_gauss_legendre(0.0, box.hi, options.panels, options.per_panel);

  std::vector<double> fl(left.size()), fr(right.size());
  parallel_for(left.size() + right.size(), [&](std::size_t i) {
    if (i < left.size()) {
      fl[i] = one_point_cdf(kind, left.nodes[i], options.grid);
    } else {
      fr[i - left.size()] = one_point_cdf(kind, right.nodes[i - left.size()], options.grid);
    }
  });
  double mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < left.size(); ++i) {
    mean -= left.weights[i] * fl[i];
    second += 2.0 * left.weights[i] * (-left.nodes[i]) * fl[i];
  }
  for (std::size_t i = 0; i < right.size(); ++i) {
    mean += right.weights[i] * (1.0 - fr[i]);
    second += 2.0 * right.weights[i] * right.nodes[i] * (1.0 - fr[i]);
  }
  return {mean, second - mean * mean};
}

DistributionMoments tracy_widom_moments(int beta, const MomentOptions& options) {
  if (beta == 2) {
    MomentOptions o = options;
    o.box = {-10.0, 6.0};
    return one_point_moments(ProcessKind::kAiry2, o);
  }
  if (beta == 1) {
    // F_1(s) = P(A_1(0) <= s / 2): moments of 2 A_1(0) over the halved box.
    MomentOptions o = options;
    o.box = {-5.0, 4.0};
    const DistributionMoments m = one_point_moments(ProcessKind::kAiry1, o);
    return {2.0 * m.mean, 4.0 * m.variance};
  }
  throw std::invalid_argument("Tracy-Widom beta must be 1 or 2");
}

namespace {

// Two-cut determinants on a tensor grid of cutoffs, with per-cutoff data
// (nodes, diagonal blocks, lambda factors) computed once.
class TwoTimeEvaluator {
 public:
  TwoTimeEvaluator(ProcessKind kind, double u, const std::vector<double>& cutoffs, const GridSpec& spec, double s_min)
      : kind_(kind), u_(u) {
    const std::size_t q = cutoffs.size();
    nodes_.resize(q);
    diag_.resize(q);
    for (std::size_t i = 0; i < q; ++i) nodes_[i] = make_nodes(cutoffs[i], spec);
    if (kind == ProcessKind::kAiry1) {
      for (std::size_t i = 0; i < q; ++i) diag_[i] = airy1_block(nodes_[i], nodes_[i], 0.0, 0.0);
      factorize();
      return;
    }
    pos_ = positive_rule(s_min, 0.0);
    pos_weights_ = lambda_weights(pos_, 0.0);
    later_weights_ = lambda_weights(pos_, -u);
    direct_ = direct_negative_ok(s_min, u);
    cross_rule_ = direct_ ? negative_rule(u) : positive_rule(s_min, u);
    cross_weights_ = lambda_weights(cross_rule_, u);
    factor_.resize(q);
    cross_factor_.resize(q);
    for (std::size_t i = 0; i < q; ++i) {
      factor_[i] = airy_factor(nodes_[i], pos_);
      cross_factor_[i] = airy_factor(nodes_[i], cross_rule_);
      diag_[i] = factor_[i] * pos_weights_.asDiagonal() * factor_[i].transpose();
    }
    factorize();
  }

  double marginal(std::size_t i) const { return marginal_[i]; }

  // P(A(0) <= s_i, A(u) <= s_j) - F_i F_j, without the cancellation. By the
  // Schur complement this is F_i F_j (det(I - A) - 1) with
  // A = (I - K_jj)^{-1} L (I - K_ii)^{-1} U.
  double connected(std::size_t i, std::size_t j) const {
    MatrixXd upper, lower;
    cross_blocks(i, j, upper, lower);
    check_finite(upper);
    check_finite(lower);
    const MatrixXd a = lu_[j].solve(lower * lu_[i].solve(upper));
    return marginal_[i] * marginal_[j] * det_identity_minus_one(a);
  }

 private:
  ProcessKind kind_;
  double u_;
  std::vector<CutNodes> nodes_;
  std::vector<MatrixXd> diag_;
  quadrature::Rule pos_, cross_rule_;
  VectorXd pos_weights_, later_weights_, cross_weights_;
  bool direct_ = false;
  std::vector<MatrixXd> factor_, cross_factor_;
  std::vector<Eigen::PartialPivLU<MatrixXd>> lu_;
  std::vector<double> marginal_;

  void factorize() {
    lu_.reserve(diag_.size());
    for (const auto& d : diag_) {
      check_finite(d);
      lu_.emplace_back(MatrixXd::Identity(d.rows(), d.cols()) - d);
      marginal_.push_back(lu_.back().determinant());
    }
  }

  void cross_blocks(std::size_t i, std::size_t j, MatrixXd& upper, MatrixXd& lower) const {
    const CutNodes& a = nodes_[i];
    const CutNodes& b = nodes_[j];
    if (kind_ == ProcessKind::kAiry1) {
      upper = airy1_block(a, b, 0.0, u_);
      lower = airy1_block(b, a, u_, 0.0);
      return;
    }
    lower = factor_[j] * later_weights_.asDiagonal() * factor_[i].transpose();
    upper = cross_factor_[i] * cross_weights_.asDiagonal() * cross_factor_[j].transpose();
    if (direct_) {
      upper = -upper;
    } else {
      upper -= heat_block(a, b, u_);
    }
  }
};

}  // namespace

double covariance(ProcessKind kind, double u, const CovarianceOptions& options) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("covariance needs a finite u >= 0");
  const Box box = resolve_box(kind, options.box);
  if (u == 0.0) {
    MomentOptions m;
    m.grid = options.grid;
    m.box = box;
    return one_point_moments(kind, m).variance;
  }
  if (options.grid.nodes < kMinNodes || options.grid.margin < kMinMargin) {
    throw std::invalid_argument("covariance grid below minimum resolution");
  }
  const auto panels = static_cast<std::size_t>(std::ceil((box.hi - box.lo) / options.panel_length - 1e-12));
  const quadrature::Rule s_rule = quadrature::composite_gauss_legendre(box.lo, box.hi, panels, options.per_panel);
  const TwoTimeEvaluator eval(kind, u, s_rule.nodes, options.grid, box.lo);

  const std::size_t q = s_rule.size();
  std::vector<double> marginal(q);
  parallel_for(q, [&](std::size_t i) { marginal[i] = eval.marginal(i); });

  std::vector<double> row_sum(q, 0.0);
  parallel_for(q, [&](std::size_t i) {
    const double bound_i = std::min(marginal[i], 1.0 - marginal[i]);
    if (bound_i < options.prune) return;
    double acc = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
      const double bound_j = std::min(marginal[j], 1.0 - marginal[j]);
      if (bound_j < options.prune) continue;
      acc += s_rule.weights[j] * eval.connected(i, j);
    }
    row_sum[i] = s_rule.weights[i] * acc;
  });
  double total = 0.0;
  for (double r : row_sum) total += r;
  return total;
}

}  // namespace kpz::fredholm
