#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kpz::stats {

// Sorted Monte-Carlo sample. Immutable after construction.
class EmpiricalDistribution {
 public:
  // Throws std::invalid_argument on an empty sample or a NaN value.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t count() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }

  // Fraction of samples <= s (right-continuous).
  double ecdf(double s) const;

 private:
  std::vector<double> sorted_;
};

double ecdf(const EmpiricalDistribution& dist, double s);

// sup_s |F_n(s) - F(s)|. For continuous F this is
// max_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|) over the sorted sample; the
// left limit of F is used on the lower side so step CDFs are handled too.
double ks_distance(const EmpiricalDistribution& dist, const std::function<double(double)>& cdf);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, n - 1 divisor
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;  // leave-one-out jackknife
};

// Throws std::invalid_argument when count < 2.
Moments moments(const EmpiricalDistribution& dist);
Moments moments(std::span<const double> samples);

struct CovarianceEstimate {
  double u = 0.0;
  double value = 0.0;
  double stderr = 0.0;
  std::size_t batches = 0;
};

inline constexpr std::size_t kMinBatches = 8;

// Cov(path[u_index], path[0]) over replicas. The point value uses every
// replica; the error bar is the spread of per-batch covariances over
// floor(replicas / batch_size) equal batches. Throws std::invalid_argument
// when fewer than kMinBatches batches fit or batch_size < 2.
CovarianceEstimate path_covariance(std::span<const std::vector<double>> paths, std::size_t u_index,
                                   double u, std::size_t batch_size);

// Sample covariance with n - 1 divisor.
double covariance(std::span<const double> a, std::span<const double> b);

// Least-squares slope and intercept of y on x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace kpz::stats
