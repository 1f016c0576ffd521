#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "typicality/errors.hpp"

namespace typicality {

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Reads only the lower triangle. Throws SingularMatrixError naming the first
// failing pivot when the matrix is not positive definite.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n == 0 || m.cols() != n) {
    throw std::invalid_argument("cholesky_lower: matrix must be square and non-empty");
  }
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j) - lower.row(j).head(j).squaredNorm();
    if (!std::isfinite(pivot) || pivot <= 0.0) {
      throw SingularMatrixError(static_cast<long>(j));
    }
    pivot = std::sqrt(pivot);
    lower(j, j) = pivot;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      lower(i, j) = (m(i, j) - lower.row(i).head(j).dot(lower.row(j).head(j))) / pivot;
    }
  }
  return lower;
}

// Natural-log determinant of S from its lower Cholesky factor.
inline double log_det_from_cholesky(const Eigen::MatrixXd& lower) {
  return 2.0 * lower.diagonal().array().log().sum();
}

// Base-2 log determinant of S from its lower Cholesky factor.
inline double log2_det_from_cholesky(const Eigen::MatrixXd& lower) {
  return log_det_from_cholesky(lower) / std::numbers::ln2;
}

// Squared Mahalanobis distance of every row of `points` under (mean, lower),
// where lower is the Cholesky factor of the covariance. One triangular solve
// per batch; the covariance is never inverted.
inline Eigen::VectorXd squared_mahalanobis(const Eigen::MatrixXd& points,
                                           const Eigen::VectorXd& mean,
                                           const Eigen::MatrixXd& lower) {
  if (points.cols() != mean.size() || mean.size() != lower.rows()) {
    throw std::domain_error("squared_mahalanobis: dimension mismatch");
  }
  const Eigen::MatrixXd centered = points.rowwise() - mean.transpose();
  const Eigen::MatrixXd solved =
      lower.triangularView<Eigen::Lower>().solve(centered.transpose());
  return solved.colwise().squaredNorm().transpose();
}

inline bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-8) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace typicality
