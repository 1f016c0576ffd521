#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace typicality {

inline double mean_of(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::domain_error("mean_of: empty input");
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Unbiased (n-1) sample variance.
inline double variance_of(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw std::domain_error("variance_of: need at least two values");
  }
  const double m = mean_of(values);
  double sum = 0.0;
  for (double v : values) sum += (v - m) * (v - m);
  return sum / static_cast<double>(values.size() - 1);
}

// Quantile by linear interpolation between order statistics; `sorted` must be
// ascending. q=0 gives the minimum, q=1 the maximum.
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) {
    throw std::domain_error("percentile_sorted: empty input");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("percentile_sorted: q must be in [0,1]");
  }
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return percentile_sorted(values, q);
}

inline double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::domain_error("median: empty input");
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the pooled
// sample, by a single merge walk over both sorted samples.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::domain_error("ks_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double stat = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    stat = std::max(stat, std::abs(static_cast<double>(i) / na -
                                   static_cast<double>(j) / nb));
  }
  return stat;
}

// Large-sample critical value: reject equality at level alpha when the KS
// statistic exceeds c(alpha) * sqrt((n+m)/(n*m)), c(alpha) = sqrt(-ln(alpha/2)/2).
inline double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0) {
    throw std::domain_error("ks_critical_value: empty sample");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("ks_critical_value: alpha must be in (0,1)");
  }
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace typicality
