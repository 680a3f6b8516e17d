#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "kpz/rng.hpp"

namespace kpz::rmt {

enum class EnsembleKind { kGUE, kGOE };

// GUE (complex Hermitian) or GOE (real symmetric) matrix. Only the lower
// triangle is stored (packed, row i holds columns 0..i), so the matrix is
// Hermitian by construction.
class MatrixState {
 public:
  MatrixState(EnsembleKind kind, std::size_t n);

  EnsembleKind kind() const { return kind_; }
  std::size_t dim() const { return n_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::complex<double> at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, std::complex<double> v);

  // Packed lower-triangle storage; imag() is empty for GOE.
  std::vector<double>& real() { return re_; }
  std::vector<double>& imag() { return im_; }
  const std::vector<double>& real() const { return re_; }
  const std::vector<double>& imag() const { return im_; }

  static std::size_t packed_index(std::size_t i, std::size_t j) { return i * (i + 1) / 2 + j; }

 private:
  EnsembleKind kind_;
  std::size_t n_;
  double time_ = 0.0;
  std::vector<double> re_;
  std::vector<double> im_;
};

// Stationary variances of the independent real components:
// GUE diagonal N, Re/Im off-diagonal N/2; GOE diagonal 2N, off-diagonal N.
double diagonal_variance(EnsembleKind kind, std::size_t n);
double off_diagonal_variance(EnsembleKind kind, std::size_t n);

// Ornstein-Uhlenbeck drift rate: 1/(2N) for GUE, 1/(4N) for GOE.
double drift_rate(EnsembleKind kind, std::size_t n);

// Throws std::invalid_argument for n == 0.
MatrixState sample_stationary(EnsembleKind kind, std::size_t n, Engine& rng);

// Exact OU transition over `delta` for every independent component:
//   x <- e^{-g delta} x + sqrt(var_stat (1 - e^{-2 g delta})) Z.
// Throws std::invalid_argument for negative or non-finite delta.
void ou_step(MatrixState& state, double delta, Engine& rng);

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // |subdiagonal|, size n - 1
};

// Householder reduction to a real symmetric tridiagonal with the same
// spectrum. Throws std::invalid_argument on non-finite entries.
Tridiagonal tridiagonalize(const MatrixState& state);

// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t count_below(const Tridiagonal& t, double x);

// Largest eigenvalue by bisection on the Sturm count.
double largest_eigenvalue(const Tridiagonal& t);

double lambda_max(const MatrixState& state);

// (lambda - 2N) / N^{1/3}
double static_rescale(double lambda, std::size_t n);

// Physical DBM time for process time u: 2 u N^{2/3} (GUE), 8 u N^{2/3} (GOE).
double dbm_time(EnsembleKind kind, std::size_t n, double u);

// (lambda - 2N) / N^{1/3} for GUE, (lambda - 2N) / (2 N^{1/3}) for GOE.
double dbm_rescale(EnsembleKind kind, double lambda, std::size_t n);

// Rescaled largest-eigenvalue path of stationary DBM sampled on `u_grid`
// (nonnegative, nondecreasing).
std::vector<double> dbm_path(EnsembleKind kind, std::size_t n, std::span<const double> u_grid, Engine& rng);

}  // namespace kpz::rmt
