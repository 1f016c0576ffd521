#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "typicality/data_matrix.hpp"
#include "typicality/errors.hpp"
#include "typicality/linalg.hpp"
#include "typicality/mcd.hpp"

namespace typicality {

enum class Estimator { Sample, Mcd, Known };

inline const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::Sample: return "sample";
    case Estimator::Mcd: return "mcd";
    case Estimator::Known: return "known";
  }
  return "unknown";
}

inline constexpr double kLog2E = std::numbers::log2e;
inline constexpr double kLn2 = std::numbers::ln2;

// Entropy of N(mu, sigma^2) in bits: 0.5*log2(2*pi*e*sigma^2).
inline double entropy_univariate(double variance) {
  if (!(variance > 0.0)) {
    throw std::domain_error("entropy_univariate: variance must be positive");
  }
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * variance);
}

// log2 of the N(mean, variance) density at x.
inline double log2_density_univariate(double x, double mean, double variance) {
  if (!(variance > 0.0)) {
    throw std::domain_error("log2_density_univariate: variance must be positive");
  }
  const double z2 = (x - mean) * (x - mean) / variance;
  return -0.5 * kLog2E *
         (std::log(2.0 * std::numbers::pi * variance) + z2);
}

// A fitted (or asserted) multivariate Gaussian with the quantities every
// downstream computation needs cached up front.
struct GaussianModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd chol_factor;  // lower triangular, covariance = L * L^T
  double log2_det = 0.0;        // log2 |covariance|
  double entropy_bits = 0.0;
  Estimator estimator = Estimator::Known;
  bool regularized = false;

  Eigen::Index dimension() const { return mean.size(); }
};

// Entropy of N(mu, cov) in bits. Throws SingularMatrixError if cov does not
// factorize.
inline double entropy_multivariate(const Eigen::MatrixXd& covariance) {
  const Eigen::Index d = covariance.rows();
  if (d < 1) {
    throw std::domain_error("entropy_multivariate: empty covariance");
  }
  const Eigen::MatrixXd lower = cholesky_lower(covariance);
  const double log2_det = log2_det_from_cholesky(lower);
  return 0.5 * static_cast<double>(d) *
             std::log2(2.0 * std::numbers::pi * std::numbers::e) +
         0.5 * log2_det;
}

// Build a model from explicit moments. A covariance that fails to factorize
// is retried once with a scale-aware ridge (1e-10 * mean diagonal); the
// `regularized` flag records that this happened.
inline GaussianModel model_from_moments(const Eigen::VectorXd& mean,
                                        const Eigen::MatrixXd& covariance,
                                        Estimator estimator) {
  const Eigen::Index d = mean.size();
  if (d < 1) {
    throw std::domain_error("model_from_moments: empty mean");
  }
  if (covariance.rows() != d || covariance.cols() != d) {
    throw std::domain_error(
        "model_from_moments: covariance shape does not match mean (D=" +
        std::to_string(d) + ")");
  }
  if (!is_symmetric(covariance)) {
    throw std::domain_error("model_from_moments: covariance is not symmetric");
  }

  GaussianModel model;
  model.mean = mean;
  model.covariance = covariance;
  model.estimator = estimator;
  try {
    model.chol_factor = cholesky_lower(covariance);
  } catch (const SingularMatrixError&) {
    const double delta = 1e-10 * covariance.trace() / static_cast<double>(d);
    model.covariance =
        covariance + delta * Eigen::MatrixXd::Identity(d, d);
    model.chol_factor = cholesky_lower(model.covariance);  // may rethrow
    model.regularized = true;
  }
  model.log2_det = log2_det_from_cholesky(model.chol_factor);
  model.entropy_bits = 0.5 * static_cast<double>(d) *
                           std::log2(2.0 * std::numbers::pi * std::numbers::e) +
                       0.5 * model.log2_det;
  return model;
}

struct FitOptions {
  std::uint64_t seed = 42;
  int mcd_starts = kDefaultMcdStarts;
  Eigen::Index mcd_h = 0;  // 0 = default_mcd_h(n, D)
};

// Fit a Gaussian to complete data with the chosen estimator. Known is not a
// fit; pass moments to model_from_moments instead.
inline GaussianModel fit_gaussian(const DataMatrix& data, Estimator estimator,
                                  const FitOptions& options = {}) {
  require_complete(data, "fit_gaussian");
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  switch (estimator) {
    case Estimator::Sample: {
      if (n <= d) {
        throw std::domain_error(
            "fit_gaussian: sample covariance needs n > D (got n=" +
            std::to_string(n) + ", D=" + std::to_string(d) + ")");
      }
      Moments m = sample_moments(data);
      return model_from_moments(m.mean, m.covariance, Estimator::Sample);
    }
    case Estimator::Mcd: {
      const Eigen::Index h =
          options.mcd_h > 0 ? options.mcd_h : default_mcd_h(n, d);
      McdResult mcd = fast_mcd(data, h, options.mcd_starts, options.seed);
      GaussianModel model =
          model_from_moments(mcd.mean, mcd.covariance, Estimator::Mcd);
      model.regularized = model.regularized || mcd.regularized;
      return model;
    }
    case Estimator::Known:
      throw std::invalid_argument(
          "fit_gaussian: Known is not an estimator; use model_from_moments");
  }
  throw std::invalid_argument("fit_gaussian: unrecognized estimator");
}

// log2 density of each row under the model, via one triangular solve.
inline Eigen::VectorXd log2_density_multivariate(const Eigen::MatrixXd& points,
                                                 const GaussianModel& model) {
  const Eigen::Index d = model.dimension();
  if (points.cols() != d) {
    throw std::domain_error(
        "log2_density_multivariate: points have " +
        std::to_string(points.cols()) + " columns, model has D=" +
        std::to_string(d));
  }
  const Eigen::VectorXd dist2 =
      squared_mahalanobis(points, model.mean, model.chol_factor);
  const double log2_norm =
      -0.5 * (static_cast<double>(d) * std::log2(2.0 * std::numbers::pi) +
              model.log2_det);
  return (log2_norm - 0.5 * kLog2E * dist2.array()).matrix();
}

inline double log2_density_multivariate(const Eigen::VectorXd& point,
                                        const GaussianModel& model) {
  return log2_density_multivariate(
      Eigen::MatrixXd(point.transpose()), model)(0);
}

// Monte-Carlo entropy estimate: minus the mean log2 density of the rows.
// For rows drawn from the model this converges to entropy_bits.
inline double empirical_entropy_estimate(const Eigen::MatrixXd& points,
                                         const GaussianModel& model) {
  if (points.rows() < 1) {
    throw std::domain_error("empirical_entropy_estimate: no points");
  }
  return -log2_density_multivariate(points, model).mean();
}

}  // namespace typicality
