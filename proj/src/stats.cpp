#include "kpz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kpz::stats {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("empirical distribution needs at least one sample");
  for (double v : sorted_) {
    if (std::isnan(v)) throw std::invalid_argument("empirical distribution sample is NaN");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::ecdf(double s) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), s);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ecdf(const EmpiricalDistribution& dist, double s) { return dist.ecdf(s); }

double ks_distance(const EmpiricalDistribution& dist, const std::function<double(double)>& cdf) {
  // sup_s |F_n(s) - F(s)|. Both are monotone and F_n is constant between
  // distinct sample values, so it suffices to compare at each value and at
  // its left limit; F's left limit is taken one ulp below.
  const auto& xs = dist.sorted();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j) / n;
    const double f = cdf(xs[i]);
    const double f_left = cdf(std::nextafter(xs[i], -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(above - f), std::abs(below - f_left)});
    i = j;
  }
  return d;
}

Moments moments(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("moments need at least two samples, got " + std::to_string(n));
  const double nd = static_cast<double>(n);

  // Shifted sums keep the variance accurate for samples far from zero.
  const double shift = x[0];
  double s1 = 0.0, s2 = 0.0;
  for (double v : x) {
    const double d = v - shift;
    s1 += d;
    s2 += d * d;
  }
  Moments m;
  m.mean = shift + s1 / nd;
  m.variance = std::max(0.0, (s2 - s1 * s1 / nd) / (nd - 1.0));
  m.mean_stderr = std::sqrt(m.variance / nd);

  if (n < 3) return m;
  // Leave-one-out variances in O(n), then the jackknife spread.
  double jk_sum = 0.0, jk_sq = 0.0;
  const double nm = nd - 1.0;
  for (double v : x) {
    const double d = v - shift;
    const double r1 = s1 - d;
    const double r2 = s2 - d * d;
    const double var_i = (r2 - r1 * r1 / nm) / (nm - 1.0);
    jk_sum += var_i;
    jk_sq += var_i * var_i;
  }
  const double jk_mean = jk_sum / nd;
  const double spread = std::max(0.0, jk_sq / nd - jk_mean * jk_mean);
  m.variance_stderr = std::sqrt((nd - 1.0) * spread);
  return m;
}

Moments moments(const EmpiricalDistribution& dist) { return moments(std::span<const double>(dist.sorted())); }

double covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("covariance needs two equal samples of size >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) c += (a[i] - ma) * (b[i] - mb);
  return c / (n - 1.0);
}

CovarianceEstimate path_covariance(std::span<const std::vector<double>> paths, std::size_t u_index, double u,
                                   std::size_t batch_size) {
  if (batch_size < 2) throw std::invalid_argument("batch size must be at least 2");
  const std::size_t batches = paths.size() / batch_size;
  if (batches < kMinBatches) {
    throw std::invalid_argument("path covariance needs at least " + std::to_string(kMinBatches * batch_size) +
                                " replicas, got " + std::to_string(paths.size()));
  }
  std::vector<double> head(paths.size()), tail(paths.size());
  for (std::size_t r = 0; r < paths.size(); ++r) {
    if (u_index >= paths[r].size() || paths[r].empty()) throw std::invalid_argument("path shorter than u_index");
    head[r] = paths[r][0];
    tail[r] = paths[r][u_index];
  }
  CovarianceEstimate est;
  est.u = u;
  est.batches = batches;
  est.value = covariance(tail, head);

  std::vector<double> per_batch(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::span<const double> hs(head.data() + b * batch_size, batch_size);
    const std::span<const double> ts(tail.data() + b * batch_size, batch_size);
    per_batch[b] = covariance(ts, hs);
  }
  est.stderr = moments(per_batch).mean_stderr;
  return est;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("line fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line fit needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      rss += r * r;
    }
    f.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return f;
}

}  // namespace kpz::stats
