#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cfmmarb::stats {

// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
// of `samples` and a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    worst = std::max({worst, hi - f, f - lo});
  }
  return worst;
}

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and the standard error of the mean (n - 1 denominator).
inline MeanAndError mean_and_error(const std::vector<double>& xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

// Standard error of the mean of a serially correlated series from
// non-overlapping batch means.
inline double batch_means_std_error(const std::vector<double>& xs,
                                    std::size_t n_batches = 100) {
  if (xs.size() < 2 * n_batches) return mean_and_error(xs).std_error;
  const std::size_t per = xs.size() / n_batches;
  std::vector<double> means(n_batches, 0.0);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += xs[i];
    means[b] = s / static_cast<double>(per);
  }
  return mean_and_error(means).std_error;
}

}  // namespace cfmmarb::stats
