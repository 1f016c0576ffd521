#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace typicality {

// Natural log of the volume of the D-ball of radius r. Exact in log space
// for any D where the inputs are finite.
inline double log_hypersphere_volume(Eigen::Index dimension, double radius = 1.0) {
  if (dimension < 1) {
    throw std::domain_error("log_hypersphere_volume: dimension must be >= 1");
  }
  if (!(radius > 0.0)) {
    throw std::domain_error("log_hypersphere_volume: radius must be positive");
  }
  const double d = static_cast<double>(dimension);
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0) +
         d * std::log(radius);
}

// Volume of the D-ball of radius r. Underflows to 0 gracefully for large D.
inline double hypersphere_volume(Eigen::Index dimension, double radius = 1.0) {
  return std::exp(log_hypersphere_volume(dimension, radius));
}

inline double log_hypercube_volume(Eigen::Index dimension, double side) {
  if (dimension < 1) {
    throw std::domain_error("log_hypercube_volume: dimension must be >= 1");
  }
  if (!(side > 0.0)) {
    throw std::domain_error("log_hypercube_volume: side must be positive");
  }
  return static_cast<double>(dimension) * std::log(side);
}

inline double hypercube_volume(Eigen::Index dimension, double side) {
  return std::exp(log_hypercube_volume(dimension, side));
}

// Natural log of (volume of [-1,1]^D) / (volume of the unit D-ball), i.e.
// how much of the circumscribing cube lies outside the sphere it encloses.
// Strictly increasing in D from D=1 (where the ratio is 1).
inline double log_cube_sphere_ratio(Eigen::Index dimension) {
  return log_hypercube_volume(dimension, 2.0) -
         log_hypersphere_volume(dimension, 1.0);
}

// Plain-value ratio; overflows to +inf somewhere past D ~ 700, use the log
// form for large D.
inline double cube_sphere_ratio(Eigen::Index dimension) {
  return std::exp(log_cube_sphere_ratio(dimension));
}

struct ExpectedNorm {
  double exact = 0.0;       // sigma * sqrt(2) * Gamma((D+1)/2) / Gamma(D/2)
  double asymptotic = 0.0;  // sigma * sqrt(D)
};

// Mean Euclidean norm of a draw from N(0, sigma^2 I_D). The exact value is
// the scaled chi-distribution mean; the asymptotic form is the sqrt(D) shell
// radius it approaches from below.
inline ExpectedNorm expected_norm(Eigen::Index dimension, double sigma = 1.0) {
  if (dimension < 1) {
    throw std::domain_error("expected_norm: dimension must be >= 1");
  }
  if (!(sigma > 0.0)) {
    throw std::domain_error("expected_norm: sigma must be positive");
  }
  const double d = static_cast<double>(dimension);
  ExpectedNorm out;
  out.exact = sigma * std::numbers::sqrt2 *
              std::exp(std::lgamma(0.5 * (d + 1.0)) - std::lgamma(0.5 * d));
  out.asymptotic = sigma * std::sqrt(d);
  return out;
}

struct VolumeCurvePoint {
  Eigen::Index dimension = 0;
  double sphere_volume = 0.0;      // unit radius
  double cube_volume = 0.0;        // side 2, circumscribing the unit sphere
  double ratio = 0.0;              // cube / sphere; +inf once past double range
  double log2_ratio = 0.0;         // exact in log space at any D
};

// Tabulate the cube-versus-sphere volume comparison for D = 1..max_dimension.
inline std::vector<VolumeCurvePoint> volume_curve(Eigen::Index max_dimension) {
  if (max_dimension < 1) {
    throw std::domain_error("volume_curve: max_dimension must be >= 1");
  }
  std::vector<VolumeCurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(max_dimension));
  for (Eigen::Index d = 1; d <= max_dimension; ++d) {
    VolumeCurvePoint p;
    p.dimension = d;
    p.sphere_volume = hypersphere_volume(d);
    p.cube_volume = hypercube_volume(d, 2.0);
    p.log2_ratio = log_cube_sphere_ratio(d) * std::numbers::log2e;
    p.ratio = std::exp(log_cube_sphere_ratio(d));
    curve.push_back(p);
  }
  return curve;
}

}  // namespace typicality
