#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "typicality/data_matrix.hpp"
#include "typicality/gaussian.hpp"
#include "typicality/geometry.hpp"
#include "typicality/mcd.hpp"
#include "typicality/outliers.hpp"
#include "typicality/random.hpp"
#include "typicality/report.hpp"
#include "typicality/stats.hpp"

namespace typicality {

namespace detail {

// n x D standard-normal matrix, filled row-major so the draw order is part of
// the contract.
inline Eigen::MatrixXd standard_normal_matrix(Eigen::Index n, Eigen::Index d,
                                              RandomStream& stream) {
  Eigen::MatrixXd z(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      z(i, j) = stream.normal();
    }
  }
  return z;
}

inline double category_code(Category c) {
  switch (c) {
    case Category::Inlier: return 0.0;
    case Category::Both: return 1.0;
    case Category::MahalanobisOnly: return 2.0;
    case Category::TypicalityOnly: return 3.0;
  }
  return -1.0;
}

}  // namespace detail

// Draw n rows from N(mean, covariance) via the lower Cholesky factor.
// Bit-identical output for a fixed seed.
inline DataMatrix sample_gaussian(Eigen::Index n, const Eigen::VectorXd& mean,
                                  const Eigen::MatrixXd& covariance,
                                  std::uint64_t seed) {
  if (n < 1) {
    throw std::domain_error("sample_gaussian: n must be >= 1");
  }
  const Eigen::Index d = mean.size();
  if (covariance.rows() != d || covariance.cols() != d) {
    throw std::domain_error(
        "sample_gaussian: covariance shape does not match mean");
  }
  const Eigen::MatrixXd lower = cholesky_lower(covariance);
  RandomStream stream(seed);
  const Eigen::MatrixXd z = detail::standard_normal_matrix(n, d, stream);
  DataMatrix out;
  out.values = (z * lower.transpose()).rowwise() + mean.transpose();
  out.missing_mask = BoolMask::Constant(n, d, false);
  return out;
}

// Mean norm of standard-Gaussian draws as a function of dimension, with 1st
// and 99th percentile bands and the sqrt(D) reference curve. The draws are
// nested: dimension D extends the same n rows by one more coordinate, so each
// row's norm (and hence the mean-norm curve) grows monotonically by
// construction rather than by statistical accident.
inline ExperimentReport norm_growth_experiment(Eigen::Index d_max,
                                               Eigen::Index n_per_d,
                                               std::uint64_t seed) {
  if (d_max < 1) {
    throw std::domain_error("norm_growth_experiment: D_max must be >= 1");
  }
  if (n_per_d < 2) {
    throw std::domain_error("norm_growth_experiment: n_per_D must be >= 2");
  }

  ExperimentReport report;
  report.name = "norm_growth";
  report.params = {{"d_max", d_max}, {"n_per_d", n_per_d}, {"seed", seed}};

  RandomStream stream = substream(seed, "norm_growth");
  const Eigen::MatrixXd z = detail::standard_normal_matrix(n_per_d, d_max, stream);
  Eigen::VectorXd squared = Eigen::VectorXd::Zero(n_per_d);

  std::vector<double> dims, means, p01s, p99s, sqrt_ds, exacts;
  bool monotone = true;
  double max_rel_gap_from_10 = 0.0;
  for (Eigen::Index d = 1; d <= d_max; ++d) {
    squared += z.col(d - 1).array().square().matrix();
    std::vector<double> norms(static_cast<std::size_t>(n_per_d));
    for (Eigen::Index i = 0; i < n_per_d; ++i) {
      norms[static_cast<std::size_t>(i)] = std::sqrt(squared[i]);
    }
    std::sort(norms.begin(), norms.end());
    const double mean_norm = mean_of(norms);
    if (!means.empty() && mean_norm <= means.back()) monotone = false;
    const double root_d = std::sqrt(static_cast<double>(d));
    if (d >= 10) {
      max_rel_gap_from_10 = std::max(max_rel_gap_from_10,
                                     std::abs(mean_norm - root_d) / root_d);
    }
    dims.push_back(static_cast<double>(d));
    means.push_back(mean_norm);
    p01s.push_back(percentile_sorted(norms, 0.01));
    p99s.push_back(percentile_sorted(norms, 0.99));
    sqrt_ds.push_back(root_d);
    exacts.push_back(expected_norm(d).exact);
  }

  Series s{"norms", {}};
  s.add_column("dimension", std::move(dims));
  s.add_column("mean_norm", std::move(means));
  s.add_column("p01_norm", std::move(p01s));
  s.add_column("p99_norm", std::move(p99s));
  s.add_column("sqrt_d", std::move(sqrt_ds));
  s.add_column("expected_norm", std::move(exacts));
  report.summary["mean_norm_at_d_max"] = s.columns[1].second.back();
  report.summary["monotone_increasing"] = monotone;
  if (d_max >= 10) {
    report.summary["max_relative_gap_to_sqrt_d_from_d10"] = max_rel_gap_from_10;
  }
  report.series.push_back(std::move(s));
  return report;
}

// Squared norms of N(0, I_D) draws next to direct chi-square draws with D
// degrees of freedom: same law, so the two-sample KS statistic should sit
// below its critical value.
inline ExperimentReport radii_distribution_experiment(Eigen::Index d,
                                                      Eigen::Index n,
                                                      std::uint64_t seed) {
  if (d < 1) {
    throw std::domain_error("radii_distribution_experiment: D must be >= 1");
  }
  if (n < 100) {
    throw std::domain_error("radii_distribution_experiment: n must be >= 100");
  }

  ExperimentReport report;
  report.name = "radii_distribution";
  report.params = {{"d", d}, {"n", n}, {"seed", seed}};

  std::vector<double> squared(static_cast<std::size_t>(n));
  {
    RandomStream stream = substream(seed, "radii_gaussian");
    for (std::size_t i = 0; i < squared.size(); ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double z = stream.normal();
        s += z * z;
      }
      squared[i] = s;
    }
  }
  std::vector<double> chi2_ref(static_cast<std::size_t>(n));
  {
    RandomStream stream = substream(seed, "radii_chi2");
    for (std::size_t i = 0; i < chi2_ref.size(); ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        const double z = stream.normal();
        s += z * z;
      }
      chi2_ref[i] = s;
    }
  }

  const double root_d = std::sqrt(static_cast<double>(d));
  std::size_t within1 = 0;
  std::size_t within2 = 0;
  std::size_t below2 = 0;
  for (double s : squared) {
    const double r = std::sqrt(s);
    if (std::abs(r - root_d) <= 1.0) ++within1;
    if (std::abs(r - root_d) <= 2.0) ++within2;
    if (r < root_d - 2.0) ++below2;
  }
  const double dn = static_cast<double>(n);

  report.summary["mean_squared_norm"] = mean_of(squared);
  report.summary["variance_squared_norm"] = variance_of(squared);
  report.summary["mean_chi2_reference"] = mean_of(chi2_ref);
  report.summary["variance_chi2_reference"] = variance_of(chi2_ref);
  report.summary["ks_statistic"] = ks_two_sample(squared, chi2_ref);
  report.summary["ks_critical_alpha_001"] =
      ks_critical_value(squared.size(), chi2_ref.size(), 0.01);
  report.summary["fraction_radius_within_1_of_sqrt_d"] = within1 / dn;
  report.summary["fraction_radius_within_2_of_sqrt_d"] = within2 / dn;
  report.summary["fraction_radius_below_sqrt_d_minus_2"] = below2 / dn;

  Series s{"samples", {}};
  s.add_column("squared_norm", std::move(squared));
  s.add_column("chi2_reference", std::move(chi2_ref));
  report.series.push_back(std::move(s));
  return report;
}

// Fraction of standard-Gaussian draws inside the typical set as epsilon
// grows, against the exact chi-square band probability.
inline ExperimentReport typical_set_coverage_experiment(
    Eigen::Index d, Eigen::Index n, const std::vector<double>& epsilons,
    std::uint64_t seed) {
  if (d < 1) {
    throw std::domain_error("typical_set_coverage_experiment: D must be >= 1");
  }
  if (n < 1) {
    throw std::domain_error("typical_set_coverage_experiment: n must be >= 1");
  }
  if (epsilons.empty()) {
    throw std::domain_error(
        "typical_set_coverage_experiment: epsilons must be non-empty");
  }
  for (double e : epsilons) {
    if (!(e >= 0.0)) {
      throw std::domain_error(
          "typical_set_coverage_experiment: epsilons must be >= 0");
    }
  }

  ExperimentReport report;
  report.name = "typical_set_coverage";
  report.params = {{"d", d}, {"n", n}, {"epsilons", epsilons}, {"seed", seed}};

  const GaussianModel model = model_from_moments(
      Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d),
      Estimator::Known);
  RandomStream stream = substream(seed, "coverage");
  const Eigen::MatrixXd z = detail::standard_normal_matrix(n, d, stream);
  const Eigen::VectorXd log2p = log2_density_multivariate(z, model);

  const boost::math::chi_squared chi2(static_cast<double>(d));
  std::vector<double> eps_col, frac_col, theory_col, rmin_col, rmax_col;
  double max_abs_error = 0.0;
  for (double eps : epsilons) {
    const TypicalityBand band = typicality_band(model, eps);
    Eigen::Index inside = 0;
    for (Eigen::Index i = 0; i < log2p.size(); ++i) {
      if (band.contains(log2p[i])) ++inside;
    }
    const double frac =
        static_cast<double>(inside) / static_cast<double>(n);
    const double shift = 2.0 * eps * kLn2;
    const double lo = std::max(0.0, static_cast<double>(d) - shift);
    const double hi = static_cast<double>(d) + shift;
    const double theory =
        boost::math::cdf(chi2, hi) - boost::math::cdf(chi2, lo);
    const AnnulusBounds bounds = annulus_bounds(d, 1.0, eps);
    max_abs_error = std::max(max_abs_error, std::abs(frac - theory));
    eps_col.push_back(eps);
    frac_col.push_back(frac);
    theory_col.push_back(theory);
    rmin_col.push_back(bounds.r_min);
    rmax_col.push_back(bounds.r_max);
  }

  Series s{"coverage", {}};
  s.add_column("epsilon_bits", std::move(eps_col));
  s.add_column("fraction_typical", std::move(frac_col));
  s.add_column("theoretical_coverage", std::move(theory_col));
  s.add_column("r_min", std::move(rmin_col));
  s.add_column("r_max", std::move(rmax_col));
  report.series.push_back(std::move(s));
  report.summary["max_abs_coverage_error"] = max_abs_error;
  return report;
}

// How rare is "average in every coordinate": fraction of draws with all D
// coordinates within +/- band standard deviations, next to the independence
// prediction (per-coordinate probability)^D.
inline ExperimentReport within_band_of_mean_experiment(Eigen::Index d,
                                                       Eigen::Index n,
                                                       double band,
                                                       std::uint64_t seed) {
  if (d < 1) {
    throw std::domain_error("within_band_of_mean_experiment: D must be >= 1");
  }
  if (n < 1) {
    throw std::domain_error("within_band_of_mean_experiment: n must be >= 1");
  }
  if (!(band > 0.0 && band < 1.0)) {
    throw std::domain_error(
        "within_band_of_mean_experiment: band must be in (0,1)");
  }

  ExperimentReport report;
  report.name = "within_band_of_mean";
  report.params = {{"d", d}, {"n", n}, {"band", band}, {"seed", seed}};

  RandomStream stream = substream(seed, "within_band");
  const Eigen::MatrixXd z = detail::standard_normal_matrix(n, d, stream);

  std::vector<double> coord_col(static_cast<std::size_t>(d)),
      frac_col(static_cast<std::size_t>(d));
  Eigen::Index joint = 0;
  Eigen::Index pooled = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index within = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(z(i, j)) <= band) ++within;
    }
    pooled += within;
    coord_col[static_cast<std::size_t>(j)] = static_cast<double>(j);
    frac_col[static_cast<std::size_t>(j)] =
        static_cast<double>(within) / static_cast<double>(n);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((z.row(i).array().abs() <= band).all()) ++joint;
  }

  const boost::math::normal gauss;
  const double p_coord = 2.0 * boost::math::cdf(gauss, band) - 1.0;
  const double dn = static_cast<double>(n);

  Series s{"per_coordinate", {}};
  s.add_column("coordinate", std::move(coord_col));
  s.add_column("fraction_within", std::move(frac_col));
  report.series.push_back(std::move(s));

  report.summary["per_coordinate_fraction"] =
      static_cast<double>(pooled) / (dn * static_cast<double>(d));
  report.summary["expected_per_coordinate"] = p_coord;
  report.summary["joint_count"] = static_cast<double>(joint);
  report.summary["joint_fraction"] = static_cast<double>(joint) / dn;
  report.summary["predicted_joint_fraction"] =
      std::pow(p_coord, static_cast<double>(d));
  report.summary["predicted_joint_count"] =
      dn * std::pow(p_coord, static_cast<double>(d));
  return report;
}

namespace detail {

// Shared tail of the planted-outlier experiments: robust fit, side-by-side
// classification, per-point verdict series, and recall bookkeeping.
inline ExperimentReport planted_comparison(std::string name,
                                           const DataMatrix& data,
                                           const std::vector<bool>& planted,
                                           std::uint64_t mcd_seed) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  const Eigen::Index h = default_mcd_h(n, d);
  const McdResult mcd = fast_mcd(data, h, kDefaultMcdStarts, mcd_seed);
  const GaussianModel model =
      model_from_moments(mcd.mean, mcd.covariance, Estimator::Mcd);
  const ComparisonResult cmp = compare_methods(
      data.values, model, kDefaultMahalanobisCutoff, kDefaultEpsilonBits);

  ExperimentReport report;
  report.name = std::move(name);

  std::vector<double> idx_col, dist_col, dens_col, mflag_col, tflag_col,
      cat_col, planted_col, norm_col;
  std::size_t planted_total = 0, planted_typ = 0, planted_mahal = 0;
  for (const OutlierVerdict& v : cmp.verdicts) {
    const std::size_t i = static_cast<std::size_t>(v.index);
    idx_col.push_back(static_cast<double>(v.index));
    norm_col.push_back(data.values.row(v.index).norm());
    dist_col.push_back(v.mahalanobis_sd);
    dens_col.push_back(v.log2_density);
    mflag_col.push_back(v.mahalanobis_outlier ? 1.0 : 0.0);
    tflag_col.push_back(v.typicality_outlier ? 1.0 : 0.0);
    cat_col.push_back(category_code(v.category));
    planted_col.push_back(planted[i] ? 1.0 : 0.0);
    if (planted[i]) {
      ++planted_total;
      if (v.typicality_outlier) ++planted_typ;
      if (v.mahalanobis_outlier) ++planted_mahal;
    }
  }

  Series s{"verdicts", {}};
  s.add_column("index", std::move(idx_col));
  s.add_column("norm", std::move(norm_col));
  s.add_column("mahalanobis_sd", std::move(dist_col));
  s.add_column("log2_density", std::move(dens_col));
  s.add_column("mahalanobis_outlier", std::move(mflag_col));
  s.add_column("typicality_outlier", std::move(tflag_col));
  s.add_column("category_code", std::move(cat_col));
  s.add_column("planted", std::move(planted_col));
  report.series.push_back(std::move(s));

  report.summary["count_inlier"] = cmp.counts.inlier;
  report.summary["count_both"] = cmp.counts.both;
  report.summary["count_mahalanobis_only"] = cmp.counts.mahalanobis_only;
  report.summary["count_typicality_only"] = cmp.counts.typicality_only;
  report.summary["planted_total"] = planted_total;
  report.summary["planted_flagged_typicality"] = planted_typ;
  report.summary["planted_flagged_mahalanobis"] = planted_mahal;
  report.summary["typicality_recall_planted"] =
      planted_total ? static_cast<double>(planted_typ) / planted_total : 0.0;
  report.summary["mahalanobis_recall_planted"] =
      planted_total ? static_cast<double>(planted_mahal) / planted_total : 0.0;
  report.summary["entropy_bits"] = model.entropy_bits;
  report.summary["band_lower_log2_density"] = cmp.band.lower;
  report.summary["band_upper_log2_density"] = cmp.band.upper;
  report.summary["mcd_consistency_factor"] = mcd.consistency_factor;
  report.summary["mcd_n_c_steps"] = mcd.n_c_steps;
  report.summary["mcd_regularized"] = mcd.regularized;
  return report;
}

}  // namespace detail

// Correlated 2-D inlier cloud plus a vertical line of planted points cutting
// across the correlation structure: the setting where distance and density
// rules agree on which side errs.
inline ExperimentReport planted_outlier_experiment_2d(std::uint64_t seed) {
  constexpr Eigen::Index kInliers = 125;
  constexpr Eigen::Index kPlanted = 17;
  constexpr double kLineX = 0.0;
  constexpr double kYMin = -4.0;
  constexpr double kYMax = 4.0;

  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.5, 0.5, 1.0;
  DataMatrix inliers = sample_gaussian(kInliers, Eigen::VectorXd::Zero(2), cov,
                                       derive_seed(seed, "planted2d_inliers"));

  DataMatrix data;
  data.values.resize(kInliers + kPlanted, 2);
  data.values.topRows(kInliers) = inliers.values;
  for (Eigen::Index k = 0; k < kPlanted; ++k) {
    const double y =
        kYMin + (kYMax - kYMin) * static_cast<double>(k) /
                    static_cast<double>(kPlanted - 1);
    data.values(kInliers + k, 0) = kLineX;
    data.values(kInliers + k, 1) = y;
  }
  data.missing_mask = BoolMask::Constant(data.values.rows(), 2, false);

  std::vector<bool> planted(static_cast<std::size_t>(kInliers + kPlanted), false);
  for (Eigen::Index k = 0; k < kPlanted; ++k) {
    planted[static_cast<std::size_t>(kInliers + k)] = true;
  }

  ExperimentReport report = detail::planted_comparison(
      "planted_2d", data, planted, derive_seed(seed, "planted2d_mcd"));
  report.params = {{"seed", seed},
                   {"n_inliers", kInliers},
                   {"covariance_offdiag", 0.5},
                   {"line_x", kLineX},
                   {"n_planted", kPlanted},
                   {"y_min", kYMin},
                   {"y_max", kYMax},
                   {"cutoff_sd", kDefaultMahalanobisCutoff},
                   {"epsilon_bits", kDefaultEpsilonBits},
                   {"estimator", "mcd"},
                   {"mcd_starts", kDefaultMcdStarts}};

  // Columns x and y, for plotting, ahead of the generic verdict columns.
  Series& s = report.series.front();
  std::vector<double> x_col, y_col;
  for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
    x_col.push_back(data.values(i, 0));
    y_col.push_back(data.values(i, 1));
  }
  s.columns.insert(s.columns.begin() + 1, {"y", std::move(y_col)});
  s.columns.insert(s.columns.begin() + 1, {"x", std::move(x_col)});
  return report;
}

// High-dimensional isotropic cloud with a few points planted beside the mode:
// far inside the annulus, so invisible to a distance cutoff but far outside
// the typical set.
inline ExperimentReport planted_outlier_experiment_highdim(std::uint64_t seed) {
  constexpr Eigen::Index kN = 1400;
  constexpr Eigen::Index kD = 20;
  constexpr Eigen::Index kPlanted = 15;
  constexpr double kBallRadius = 0.5;

  DataMatrix data = sample_gaussian(kN, Eigen::VectorXd::Zero(kD),
                                    Eigen::MatrixXd::Identity(kD, kD),
                                    derive_seed(seed, "planted_hd_background"));

  // Replace the first kPlanted rows with draws uniform in the ball of radius
  // kBallRadius around the origin.
  RandomStream stream = substream(seed, "planted_hd_planted");
  for (Eigen::Index k = 0; k < kPlanted; ++k) {
    Eigen::VectorXd direction(kD);
    double norm = 0.0;
    do {
      for (Eigen::Index j = 0; j < kD; ++j) direction[j] = stream.normal();
      norm = direction.norm();
    } while (norm < 1e-12);
    const double radius =
        kBallRadius *
        std::pow(stream.uniform01(), 1.0 / static_cast<double>(kD));
    data.values.row(k) = (radius / norm) * direction.transpose();
  }

  std::vector<bool> planted(static_cast<std::size_t>(kN), false);
  for (Eigen::Index k = 0; k < kPlanted; ++k) {
    planted[static_cast<std::size_t>(k)] = true;
  }

  ExperimentReport report = detail::planted_comparison(
      "planted_highdim", data, planted, derive_seed(seed, "planted_hd_mcd"));
  report.params = {{"seed", seed},
                   {"n", kN},
                   {"d", kD},
                   {"n_planted", kPlanted},
                   {"planted_rows", "0..14"},
                   {"ball_radius", kBallRadius},
                   {"cutoff_sd", kDefaultMahalanobisCutoff},
                   {"epsilon_bits", kDefaultEpsilonBits},
                   {"estimator", "mcd"},
                   {"mcd_starts", kDefaultMcdStarts}};
  return report;
}

}  // namespace typicality
