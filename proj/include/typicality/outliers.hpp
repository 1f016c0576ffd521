#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "typicality/gaussian.hpp"
#include "typicality/linalg.hpp"

namespace typicality {

inline constexpr double kDefaultMahalanobisCutoff = 3.0;
inline constexpr double kDefaultEpsilonBits = 5.0;

// The typical set in log2-density form: a point is typical iff its log2
// density lies in [lower, upper] (both ends included).
struct TypicalityBand {
  double entropy_bits = 0.0;
  double epsilon_bits = 0.0;
  double lower = 0.0;  // -(H + eps)
  double upper = 0.0;  // -(H - eps)

  bool contains(double log2_density) const {
    return log2_density >= lower && log2_density <= upper;
  }
};

inline TypicalityBand typicality_band(const GaussianModel& model,
                                      double epsilon_bits = kDefaultEpsilonBits) {
  if (!(epsilon_bits >= 0.0)) {
    throw std::domain_error("typicality_band: epsilon must be >= 0");
  }
  TypicalityBand band;
  band.entropy_bits = model.entropy_bits;
  band.epsilon_bits = epsilon_bits;
  band.lower = -(model.entropy_bits + epsilon_bits);
  band.upper = -(model.entropy_bits - epsilon_bits);
  return band;
}

enum class Category { Inlier, Both, MahalanobisOnly, TypicalityOnly };

inline const char* to_string(Category c) {
  switch (c) {
    case Category::Inlier: return "inlier";
    case Category::Both: return "both";
    case Category::MahalanobisOnly: return "mahalanobis_only";
    case Category::TypicalityOnly: return "typicality_only";
  }
  return "unknown";
}

inline Category categorize(bool mahalanobis_outlier, bool typicality_outlier) {
  if (mahalanobis_outlier && typicality_outlier) return Category::Both;
  if (mahalanobis_outlier) return Category::MahalanobisOnly;
  if (typicality_outlier) return Category::TypicalityOnly;
  return Category::Inlier;
}

struct OutlierVerdict {
  Eigen::Index index = 0;
  double mahalanobis_sd = 0.0;
  double log2_density = 0.0;
  bool mahalanobis_outlier = false;
  bool typicality_outlier = false;
  Category category = Category::Inlier;
};

struct CategoryCounts {
  std::size_t inlier = 0;
  std::size_t both = 0;
  std::size_t mahalanobis_only = 0;
  std::size_t typicality_only = 0;

  std::size_t total() const {
    return inlier + both + mahalanobis_only + typicality_only;
  }
};

struct ComparisonResult {
  std::vector<OutlierVerdict> verdicts;
  CategoryCounts counts;
  TypicalityBand band;
  double cutoff_sd = kDefaultMahalanobisCutoff;
};

// Mahalanobis distance of each row from the model mean, in SD units.
inline Eigen::VectorXd mahalanobis_distance(const Eigen::MatrixXd& points,
                                            const GaussianModel& model) {
  if (points.cols() != model.dimension()) {
    throw std::domain_error(
        "mahalanobis_distance: points have " + std::to_string(points.cols()) +
        " columns, model has D=" + std::to_string(model.dimension()));
  }
  return squared_mahalanobis(points, model.mean, model.chol_factor)
      .array()
      .sqrt()
      .matrix();
}

// Distance rule: outlier iff M(x) > cutoff, strictly.
inline std::vector<bool> classify_mahalanobis(
    const Eigen::MatrixXd& points, const GaussianModel& model,
    double cutoff_sd = kDefaultMahalanobisCutoff) {
  if (!(cutoff_sd > 0.0)) {
    throw std::domain_error("classify_mahalanobis: cutoff must be positive");
  }
  const Eigen::VectorXd dist = mahalanobis_distance(points, model);
  std::vector<bool> out(static_cast<std::size_t>(dist.size()));
  for (Eigen::Index i = 0; i < dist.size(); ++i) {
    out[static_cast<std::size_t>(i)] = dist[i] > cutoff_sd;
  }
  return out;
}

// Density rule: outlier iff the log2 density falls outside the typicality
// band. Points can fail high (too close to the mode) as well as low.
inline std::vector<bool> classify_typicality(
    const Eigen::MatrixXd& points, const GaussianModel& model,
    double epsilon_bits = kDefaultEpsilonBits) {
  const TypicalityBand band = typicality_band(model, epsilon_bits);
  const Eigen::VectorXd log2p = log2_density_multivariate(points, model);
  std::vector<bool> out(static_cast<std::size_t>(log2p.size()));
  for (Eigen::Index i = 0; i < log2p.size(); ++i) {
    out[static_cast<std::size_t>(i)] = !band.contains(log2p[i]);
  }
  return out;
}

struct AnnulusBounds {
  double r_min = 0.0;
  double r_max = 0.0;
};

// For N(0, sigma^2 I_D) the typical set is the annulus r_min <= |x| <= r_max.
// The inner radius collapses to 0 once epsilon exceeds (D/2)*log2(e), at
// which point the set is a solid ball.
inline AnnulusBounds annulus_bounds(Eigen::Index dimension, double sigma,
                                    double epsilon_bits) {
  if (dimension < 1) {
    throw std::domain_error("annulus_bounds: dimension must be >= 1");
  }
  if (!(sigma > 0.0)) {
    throw std::domain_error("annulus_bounds: sigma must be positive");
  }
  if (!(epsilon_bits >= 0.0)) {
    throw std::domain_error("annulus_bounds: epsilon must be >= 0");
  }
  const double d = static_cast<double>(dimension);
  const double shift = 2.0 * epsilon_bits * kLn2;
  AnnulusBounds b;
  b.r_min = sigma * std::sqrt(std::max(0.0, d - shift));
  b.r_max = sigma * std::sqrt(d + shift);
  return b;
}

// Score every row once and report both rules side by side.
inline ComparisonResult compare_methods(
    const Eigen::MatrixXd& points, const GaussianModel& model,
    double cutoff_sd = kDefaultMahalanobisCutoff,
    double epsilon_bits = kDefaultEpsilonBits) {
  if (!(cutoff_sd > 0.0)) {
    throw std::domain_error("compare_methods: cutoff must be positive");
  }
  ComparisonResult result;
  result.band = typicality_band(model, epsilon_bits);
  result.cutoff_sd = cutoff_sd;

  const Eigen::VectorXd dist = mahalanobis_distance(points, model);
  const Eigen::VectorXd log2p = log2_density_multivariate(points, model);

  result.verdicts.resize(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    OutlierVerdict& v = result.verdicts[static_cast<std::size_t>(i)];
    v.index = i;
    v.mahalanobis_sd = dist[i];
    v.log2_density = log2p[i];
    v.mahalanobis_outlier = dist[i] > cutoff_sd;
    v.typicality_outlier = !result.band.contains(log2p[i]);
    v.category = categorize(v.mahalanobis_outlier, v.typicality_outlier);
    switch (v.category) {
      case Category::Inlier: ++result.counts.inlier; break;
      case Category::Both: ++result.counts.both; break;
      case Category::MahalanobisOnly: ++result.counts.mahalanobis_only; break;
      case Category::TypicalityOnly: ++result.counts.typicality_only; break;
    }
  }
  return result;
}

}  // namespace typicality
