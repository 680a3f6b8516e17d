#include "kpz/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace kpz::rmt {

MatrixState::MatrixState(EnsembleKind kind, std::size_t n) : kind_(kind), n_(n) {
  if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
  re_.assign(n * (n + 1) / 2, 0.0);
  if (kind == EnsembleKind::kGUE) im_.assign(n * (n + 1) / 2, 0.0);
}

std::complex<double> MatrixState::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("matrix index out of range");
  if (i >= j) {
    const std::size_t k = packed_index(i, j);
    return {re_[k], im_.empty() ? 0.0 : im_[k]};
  }
  const std::size_t k = packed_index(j, i);
  return {re_[k], im_.empty() ? 0.0 : -im_[k]};
}

void MatrixState::set(std::size_t i, std::size_t j, std::complex<double> v) {
  if (i >= n_ || j >= n_) throw std::out_of_range("matrix index out of range");
  if (i == j && v.imag() != 0.0) throw std::invalid_argument("diagonal entries must be real");
  if (kind_ == EnsembleKind::kGOE && v.imag() != 0.0) throw std::invalid_argument("GOE entries must be real");
  if (i < j) {
    std::swap(i, j);
    v = std::conj(v);
  }
  const std::size_t k = packed_index(i, j);
  re_[k] = v.real();
  if (!im_.empty()) im_[k] = v.imag();
}

double diagonal_variance(EnsembleKind kind, std::size_t n) {
  return kind == EnsembleKind::kGUE ? static_cast<double>(n) : 2.0 * static_cast<double>(n);
}

double off_diagonal_variance(EnsembleKind kind, std::size_t n) {
  return kind == EnsembleKind::kGUE ? 0.5 * static_cast<double>(n) : static_cast<double>(n);
}

double drift_rate(EnsembleKind kind, std::size_t n) {
  return kind == EnsembleKind::kGUE ? 1.0 / (2.0 * static_cast<double>(n)) : 1.0 / (4.0 * static_cast<double>(n));
}

MatrixState sample_stationary(EnsembleKind kind, std::size_t n, Engine& rng) {
  MatrixState state(kind, n);
  std::normal_distribution<double> normal;
  const double sd_diag = std::sqrt(diagonal_variance(kind, n));
  const double sd_off = std::sqrt(off_diagonal_variance(kind, n));
  auto& re = state.real();
  auto& im = state.imag();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const std::size_t k = MatrixState::packed_index(i, j);
      if (i == j) {
        re[k] = sd_diag * normal(rng);
      } else {
        re[k] = sd_off * normal(rng);
        if (!im.empty()) im[k] = sd_off * normal(rng);
      }
    }
  }
  return state;
}

void ou_step(MatrixState& state, double delta, Engine& rng) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("OU step needs a finite delta >= 0");
  if (delta == 0.0) return;
  const std::size_t n = state.dim();
  const double g = drift_rate(state.kind(), n);
  const double decay = std::exp(-g * delta);
  const double refresh = -std::expm1(-2.0 * g * delta);
  const double sd_diag = std::sqrt(diagonal_variance(state.kind(), n) * refresh);
  const double sd_off = std::sqrt(off_diagonal_variance(state.kind(), n) * refresh);
  std::normal_distribution<double> normal;
  auto& re = state.real();
  auto& im = state.imag();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const std::size_t k = MatrixState::packed_index(i, j);
      if (i == j) {
        re[k] = decay * re[k] + sd_diag * normal(rng);
      } else {
        re[k] = decay * re[k] + sd_off * normal(rng);
        if (!im.empty()) im[k] = decay * im[k] + sd_off * normal(rng);
      }
    }
  }
  state.set_time(state.time() + delta);
}

namespace {

// Householder reduction on the lower triangle of a column-major n x n
// array (split real/imaginary parts). Each step applies H = I - tau v v^H,
// tau = 2 / |v|^2, a Hermitian unitary reflector, as A <- H A H.
template <bool kComplex>
Tridiagonal householder(std::size_t n, std::vector<double>& ar, std::vector<double>& ai) {
  Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n > 0 ? n - 1 : 0);
  std::vector<double> vr(n), vi(n), pr(n), pi(n);
  auto idx = [n](std::size_t i, std::size_t j) { return j * n + i; };

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t m = n - k - 1;  // trailing size
    const std::size_t c = k + 1;      // first trailing index
    double norm2 = 0.0;
    for (std::size_t i = c; i < n; ++i) {
      norm2 += ar[idx(i, k)] * ar[idx(i, k)];
      if constexpr (kComplex) norm2 += ai[idx(i, k)] * ai[idx(i, k)];
    }
    const double norm = std::sqrt(norm2);
    t.diag[k] = ar[idx(k, k)];
    t.off[k] = norm;
    const double x0r = ar[idx(c, k)];
    const double x0i = kComplex ? ai[idx(c, k)] : 0.0;
    const double x0abs = std::hypot(x0r, x0i);
    // Nothing to annihilate beyond the first entry.
    if (norm == 0.0 || norm2 - x0abs * x0abs <= 0.0) continue;

    // v = x + e^{i arg x0} |x| e1
    double phr = 1.0, phi = 0.0;
    if (x0abs > 0.0) {
      phr = x0r / x0abs;
      phi = x0i / x0abs;
    }
    for (std::size_t i = 0; i < m; ++i) {
      vr[i] = ar[idx(c + i, k)];
      vi[i] = kComplex ? ai[idx(c + i, k)] : 0.0;
    }
    vr[0] += phr * norm;
    vi[0] += phi * norm;
    const double tau = 1.0 / (norm * (norm + x0abs));  // 2 / |v|^2

    // p = tau A22 v using the lower triangle only.
    std::fill(pr.begin(), pr.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    std::fill(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double* colr = &ar[idx(c, c + j)];
      const double* coli = kComplex ? &ai[idx(c, c + j)] : nullptr;
      const double vjr = vr[j], vji = vi[j];
      double sr = colr[j] * vjr;  // diagonal is real
      double si = kComplex ? colr[j] * vji : 0.0;
      for (std::size_t i = j + 1; i < m; ++i) {
        const double a_r = colr[i];
        if constexpr (kComplex) {
          const double a_i = coli[i];
          // p_i += A_ij v_j
          pr[i] += a_r * vjr - a_i * vji;
          pi[i] += a_r * vji + a_i * vjr;
          // p_j += conj(A_ij) v_i
          sr += a_r * vr[i] + a_i * vi[i];
          si += a_r * vi[i] - a_i * vr[i];
        } else {
          pr[i] += a_r * vjr;
          sr += a_r * vr[i];
        }
      }
      pr[j] += sr;
      pi[j] += si;
    }
    // K = tau/2 v^H p (real), w = tau p - K v
    double vhp = 0.0;
    for (std::size_t i = 0; i < m; ++i) vhp += vr[i] * pr[i] + vi[i] * pi[i];
    const double kk = 0.5 * tau * tau * vhp;
    for (std::size_t i = 0; i < m; ++i) {
      pr[i] = tau * pr[i] - kk * vr[i];
      pi[i] = tau * pi[i] - kk * vi[i];
    }
    // A22 <- A22 - v w^H - w v^H on the lower triangle.
    for (std::size_t j = 0; j < m; ++j) {
      double* colr = &ar[idx(c, c + j)];
      double* coli = kComplex ? &ai[idx(c, c + j)] : nullptr;
      const double wjr = pr[j], wji = pi[j], vjr = vr[j], vji = vi[j];
      for (std::size_t i = j; i < m; ++i) {
        if constexpr (kComplex) {
          // v_i conj(w_j) + w_i conj(v_j)
          colr[i] -= vr[i] * wjr + vi[i] * wji + pr[i] * vjr + pi[i] * vji;
          coli[i] -= vi[i] * wjr - vr[i] * wji + pi[i] * vjr - pr[i] * vji;
        } else {
          colr[i] -= vr[i] * wjr + pr[i] * vjr;
        }
      }
      if constexpr (kComplex) coli[j] = 0.0;
    }
  }
  if (n > 0) t.diag[n - 1] = ar[idx(n - 1, n - 1)];
  return t;
}

}  // namespace

Tridiagonal tridiagonalize(const MatrixState& state) {
  const std::size_t n = state.dim();
  const bool complex = state.kind() == EnsembleKind::kGUE;
  std::vector<double> ar(n * n, 0.0), ai(complex ? n * n : 0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const std::size_t k = MatrixState::packed_index(i, j);
      const double re = state.real()[k];
      const double im = complex ? state.imag()[k] : 0.0;
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw std::invalid_argument("matrix entry (" + std::to_string(i) + ", " + std::to_string(j) + ") is not finite");
      }
      ar[j * n + i] = re;
      if (complex) ai[j * n + i] = im;
    }
  }
  return complex ? householder<true>(n, ar, ai) : householder<false>(n, ar, ai);
}

std::size_t count_below(const Tridiagonal& t, double x) {
  const std::size_t n = t.diag.size();
  std::size_t count = 0;
  double q = 1.0;
  constexpr double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = (i == 0) ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - x - e2 / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double largest_eigenvalue(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  if (n == 0) throw std::invalid_argument("empty tridiagonal");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? t.off[i - 1] : 0.0) + (i + 1 < n ? t.off[i] : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
    scale = std::max(scale, std::abs(t.diag[i]) + r);
  }
  if (scale == 0.0) return 0.0;
  // Largest eigenvalue: the sup of x with fewer than n eigenvalues below x.
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(t, mid) == n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double lambda_max(const MatrixState& state) { return largest_eigenvalue(tridiagonalize(state)); }

double static_rescale(double lambda, std::size_t n) {
  if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
  const double nd = static_cast<double>(n);
  return (lambda - 2.0 * nd) / std::cbrt(nd);
}

double dbm_time(EnsembleKind kind, std::size_t n, double u) {
  const double scale = std::pow(static_cast<double>(n), 2.0 / 3.0);
  return (kind == EnsembleKind::kGUE ? 2.0 : 8.0) * u * scale;
}

double dbm_rescale(EnsembleKind kind, double lambda, std::size_t n) {
  const double base = static_rescale(lambda, n);
  return kind == EnsembleKind::kGUE ? base : 0.5 * base;
}

std::vector<double> dbm_path(EnsembleKind kind, std::size_t n, std::span<const double> u_grid, Engine& rng) {
  for (std::size_t k = 0; k < u_grid.size(); ++k) {
    if (!(u_grid[k] >= 0.0) || (k > 0 && u_grid[k] < u_grid[k - 1])) {
      throw std::invalid_argument("DBM u grid must be nonnegative and nondecreasing");
    }
  }
  MatrixState state = sample_stationary(kind, n, rng);
  std::vector<double> path;
  path.reserve(u_grid.size());
  double now = 0.0;
  for (double u : u_grid) {
    const double target = dbm_time(kind, n, u);
    ou_step(state, target - now, rng);
    now = target;
    path.push_back(dbm_rescale(kind, lambda_max(state), n));
  }
  return path;
}

}  // namespace kpz::rmt
