#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "typicality/data_matrix.hpp"
#include "typicality/errors.hpp"
#include "typicality/linalg.hpp"
#include "typicality/random.hpp"

namespace typicality {

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Arithmetic mean per column and (n-1)-denominator covariance.
inline Moments sample_moments(const DataMatrix& data) {
  require_complete(data, "sample_moments");
  const Eigen::Index n = data.rows();
  if (n < 2) {
    throw std::domain_error("sample_moments: need at least two observations");
  }
  Moments m;
  m.mean = data.values.colwise().mean();
  const Eigen::MatrixXd centered = data.values.rowwise() - m.mean.transpose();
  m.covariance = (centered.transpose() * centered) / static_cast<double>(n - 1);
  return m;
}

namespace detail {

// Moments of the rows listed in `subset`, (m-1) denominator.
inline Moments subset_moments(const Eigen::MatrixXd& values,
                              const std::vector<std::size_t>& subset) {
  const Eigen::Index d = values.cols();
  const Eigen::Index m = static_cast<Eigen::Index>(subset.size());
  Eigen::MatrixXd rows(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    rows.row(i) = values.row(static_cast<Eigen::Index>(subset[static_cast<std::size_t>(i)]));
  }
  Moments out;
  out.mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - out.mean.transpose();
  out.covariance = (centered.transpose() * centered) / static_cast<double>(m - 1);
  return out;
}

// Scale-aware ridge used when a subset covariance fails to factorize.
inline Eigen::MatrixXd regularize_covariance(const Eigen::MatrixXd& cov) {
  const double delta = 1e-10 * cov.trace() / static_cast<double>(cov.rows());
  return cov + delta * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
}

}  // namespace detail

struct CStepResult {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::vector<bool> support;  // exactly h entries true
  double log_det = 0.0;       // natural log |covariance|
  bool regularized = false;
};

// One concentration step: rank all points by squared Mahalanobis distance
// under the input moments, keep the h closest (ties broken by index), and
// re-estimate moments from that subset. When the input moments come from an
// h-point subset, the determinant never increases.
inline CStepResult c_step(const DataMatrix& data, const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& covariance, Eigen::Index h) {
  require_complete(data, "c_step");
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (h < d + 1 || h > n) {
    throw std::domain_error("c_step: h must satisfy D+1 <= h <= n");
  }

  const Eigen::MatrixXd lower = cholesky_lower(covariance);
  const Eigen::VectorXd dist2 = squared_mahalanobis(data.values, mean, lower);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (dist2[a] != dist2[b]) return dist2[a] < dist2[b];
    return a < b;
  });

  CStepResult out;
  out.support.assign(static_cast<std::size_t>(n), false);
  std::vector<std::size_t> subset(static_cast<std::size_t>(h));
  for (Eigen::Index i = 0; i < h; ++i) {
    const Eigen::Index row = order[static_cast<std::size_t>(i)];
    subset[static_cast<std::size_t>(i)] = static_cast<std::size_t>(row);
    out.support[static_cast<std::size_t>(row)] = true;
  }

  Moments m = detail::subset_moments(data.values, subset);
  out.mean = std::move(m.mean);
  out.covariance = std::move(m.covariance);
  try {
    out.log_det = log_det_from_cholesky(cholesky_lower(out.covariance));
  } catch (const SingularMatrixError&) {
    out.covariance = detail::regularize_covariance(out.covariance);
    out.regularized = true;
    out.log_det = log_det_from_cholesky(cholesky_lower(out.covariance));
  }
  return out;
}

struct McdResult {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // consistency-corrected
  std::vector<bool> support;   // exactly h entries true
  double raw_determinant_log = 0.0;  // natural log det of the uncorrected winner
  int n_c_steps = 0;                 // concentration steps on the winning chain
  std::uint64_t seed = 0;
  Eigen::Index h = 0;
  double consistency_factor = 1.0;
  bool regularized = false;
};

// Maximal-breakdown default subset size.
inline Eigen::Index default_mcd_h(Eigen::Index n, Eigen::Index d) {
  return (n + d + 1) / 2;
}

inline constexpr int kDefaultMcdStarts = 500;

// FAST-MCD: seeded random (D+1)-element starts, two concentration steps each,
// the ten best refined to convergence, and the winner's scatter rescaled by
// the median-chi-square consistency factor. Deterministic for a fixed seed;
// start k draws only from substream (seed, k), so evaluation order is
// immaterial.
inline McdResult fast_mcd(const DataMatrix& data, Eigen::Index h, int n_starts,
                          std::uint64_t seed) {
  require_complete(data, "fast_mcd");
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (h < d + 1 || h > n) {
    throw std::domain_error("fast_mcd: h must satisfy D+1 <= h <= n (got h=" +
                            std::to_string(h) + ", n=" + std::to_string(n) +
                            ", D=" + std::to_string(d) + ")");
  }
  if (n_starts < 1) {
    throw std::domain_error("fast_mcd: n_starts must be positive");
  }

  struct Candidate {
    CStepResult state;
    int start_index = 0;
    int steps = 0;
  };

  std::vector<Candidate> candidates;

  if (h == n) {
    // Full-sample subset: nothing to search.
    Moments m = sample_moments(data);
    Candidate full;
    full.state.mean = std::move(m.mean);
    full.state.covariance = std::move(m.covariance);
    full.state.support.assign(static_cast<std::size_t>(n), true);
    try {
      full.state.log_det = log_det_from_cholesky(cholesky_lower(full.state.covariance));
    } catch (const SingularMatrixError&) {
      full.state.covariance = detail::regularize_covariance(full.state.covariance);
      full.state.regularized = true;
      full.state.log_det = log_det_from_cholesky(cholesky_lower(full.state.covariance));
    }
    candidates.push_back(std::move(full));
  } else {
    long last_failed_pivot = -1;
    for (int k = 0; k < n_starts; ++k) {
      RandomStream stream = substream(seed, "mcd_start", static_cast<std::uint64_t>(k));
      std::vector<std::size_t> subset = stream.sample_without_replacement(
          static_cast<std::size_t>(d + 1), static_cast<std::size_t>(n));

      // Grow the trial subset until its covariance factorizes, as in the
      // classical algorithm; abandon the start only at subset size n.
      Moments m;
      bool viable = false;
      while (true) {
        m = detail::subset_moments(data.values, subset);
        try {
          cholesky_lower(m.covariance);
          viable = true;
          break;
        } catch (const SingularMatrixError& err) {
          last_failed_pivot = err.pivot();
          if (subset.size() == static_cast<std::size_t>(n)) break;
          std::vector<bool> in_subset(static_cast<std::size_t>(n), false);
          for (std::size_t idx : subset) in_subset[idx] = true;
          std::size_t skip = stream.below(static_cast<std::uint64_t>(n) -
                                          static_cast<std::uint64_t>(subset.size()));
          for (std::size_t row = 0; row < static_cast<std::size_t>(n); ++row) {
            if (in_subset[row]) continue;
            if (skip == 0) {
              subset.push_back(row);
              break;
            }
            --skip;
          }
        }
      }
      if (!viable) continue;

      Candidate cand;
      cand.start_index = k;
      cand.state = c_step(data, m.mean, m.covariance, h);
      cand.steps = 1;
      CStepResult second = c_step(data, cand.state.mean, cand.state.covariance, h);
      ++cand.steps;
      cand.state = std::move(second);
      candidates.push_back(std::move(cand));
    }
    if (candidates.empty()) {
      throw SingularMatrixError(last_failed_pivot,
                                "fast_mcd: every start produced singular moments");
    }
  }

  // Keep the ten most concentrated candidates; ties broken by start index so
  // the outcome is independent of evaluation order.
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.state.log_det != b.state.log_det) return a.state.log_det < b.state.log_det;
    return a.start_index < b.start_index;
  });
  if (candidates.size() > 10) candidates.resize(10);

  // Refine each finalist until the determinant stalls or the support repeats.
  for (Candidate& cand : candidates) {
    for (int step = 0; step < 100; ++step) {
      if (h == n) break;
      CStepResult next = c_step(data, cand.state.mean, cand.state.covariance, h);
      ++cand.steps;
      const bool same_support = next.support == cand.state.support;
      const double delta = std::abs(next.log_det - cand.state.log_det);
      cand.state = std::move(next);
      if (same_support || delta < 1e-12) break;
    }
  }

  const Candidate* best = &candidates.front();
  for (const Candidate& cand : candidates) {
    if (cand.state.log_det < best->state.log_det) best = &cand;
  }

  McdResult result;
  result.mean = best->state.mean;
  result.support = best->state.support;
  result.raw_determinant_log = best->state.log_det;
  result.n_c_steps = best->steps;
  result.seed = seed;
  result.h = h;
  result.regularized = best->state.regularized;

  // Median-chi-square consistency factor: under clean Gaussian data the
  // corrected scatter makes the median squared distance match its chi-square
  // median, undoing the shrinkage of estimating from the h best points.
  const Eigen::MatrixXd raw_lower = cholesky_lower(best->state.covariance);
  Eigen::VectorXd dist2 = squared_mahalanobis(data.values, result.mean, raw_lower);
  std::vector<double> d2(dist2.data(), dist2.data() + dist2.size());
  std::sort(d2.begin(), d2.end());
  const std::size_t mid = d2.size() / 2;
  const double median =
      (d2.size() % 2 == 1) ? d2[mid] : 0.5 * (d2[mid - 1] + d2[mid]);
  const boost::math::chi_squared chi2(static_cast<double>(d));
  result.consistency_factor = median / boost::math::quantile(chi2, 0.5);
  result.covariance = result.consistency_factor * best->state.covariance;
  return result;
}

}  // namespace typicality
