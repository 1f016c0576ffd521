#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include <typicality/outliers.hpp>
#include <typicality/simulation.hpp>

using namespace typicality;

namespace {

const std::vector<double>& column(const ExperimentReport& report,
                                  const std::string& series,
                                  const std::string& name) {
  for (const Series& s : report.series) {
    if (s.name != series) continue;
    for (const auto& [col, values] : s.columns) {
      if (col == name) return values;
    }
  }
  FAIL("missing column " + series + "/" + name);
  static const std::vector<double> empty;
  return empty;
}

}  // namespace

TEST_CASE("sample_gaussian is deterministic and hits its moments") {
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.3, 0.3, 2.0;
  Eigen::VectorXd mean(2);
  mean << -1.0, 4.0;
  const DataMatrix a = sample_gaussian(5000, mean, cov, 11);
  const DataMatrix b = sample_gaussian(5000, mean, cov, 11);
  REQUIRE((a.values.array() == b.values.array()).all());

  const Eigen::VectorXd empirical_mean = a.values.colwise().mean();
  const double bound = 4.0 * std::sqrt(2.0) / std::sqrt(5000.0);
  REQUIRE(std::abs(empirical_mean[0] - mean[0]) < bound);
  REQUIRE(std::abs(empirical_mean[1] - mean[1]) < bound);
}

TEST_CASE("univariate sample variance lands within 5 percent") {
  const DataMatrix draws = sample_gaussian(
      10000, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 21);
  const double mean = draws.values.col(0).mean();
  const double var =
      (draws.values.col(0).array() - mean).square().sum() / 9999.0;
  REQUIRE(var == Catch::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sample_gaussian propagates factorization failure") {
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  REQUIRE_THROWS_AS(
      sample_gaussian(10, Eigen::VectorXd::Zero(2), indefinite, 1),
      SingularMatrixError);
}

TEST_CASE("norm growth curve at the documented scale") {
  const ExperimentReport report = norm_growth_experiment(100, 200, 42);
  const auto& dims = column(report, "norms", "dimension");
  const auto& means = column(report, "norms", "mean_norm");
  const auto& p01 = column(report, "norms", "p01_norm");
  const auto& p99 = column(report, "norms", "p99_norm");
  REQUIRE(dims.size() == 100);

  // Mean norm in 100 dimensions concentrates just below 10.
  REQUIRE(std::abs(means[99] - 10.0) / 10.0 < 0.02);
  // Mean absolute value of a single standard normal.
  REQUIRE(means[0] == Catch::Approx(0.7978845608028654).margin(0.13));
  // Nested draws make growth structural, for any seed.
  REQUIRE(report.summary["monotone_increasing"].get<bool>());
  for (std::size_t i = 1; i < means.size(); ++i) {
    REQUIRE(means[i] > means[i - 1]);
  }
  for (std::size_t i = 0; i < means.size(); ++i) {
    REQUIRE(p01[i] <= means[i]);
    REQUIRE(means[i] <= p99[i]);
  }
  REQUIRE(norm_growth_experiment(5, 50, 7)
              .summary["monotone_increasing"].get<bool>());
  REQUIRE_THROWS_AS(norm_growth_experiment(0, 200, 1), std::domain_error);
  REQUIRE_THROWS_AS(norm_growth_experiment(10, 1, 1), std::domain_error);
}

TEST_CASE("squared norms behave like chi-square draws") {
  const ExperimentReport report = radii_distribution_experiment(40, 10000, 42);
  REQUIRE(report.summary["mean_squared_norm"].get<double>() ==
          Catch::Approx(40.0).epsilon(0.05));
  REQUIRE(report.summary["variance_squared_norm"].get<double>() ==
          Catch::Approx(80.0).epsilon(0.10));
  REQUIRE(report.summary["ks_statistic"].get<double>() <
          report.summary["ks_critical_alpha_001"].get<double>());
  REQUIRE(column(report, "samples", "squared_norm").size() == 10000);
  REQUIRE_THROWS_AS(radii_distribution_experiment(40, 99, 1),
                    std::domain_error);
}

TEST_CASE("coverage grows with epsilon and matches the chi-square band") {
  const ExperimentReport report =
      typical_set_coverage_experiment(20, 20000, {0.0, 1.0, 5.0, 20.0}, 42);
  const auto& fraction = column(report, "coverage", "fraction_typical");
  const auto& theory = column(report, "coverage", "theoretical_coverage");
  const auto& r_min = column(report, "coverage", "r_min");
  const auto& r_max = column(report, "coverage", "r_max");

  REQUIRE(fraction[0] == 0.0);  // measure-zero shell at epsilon 0
  for (std::size_t i = 1; i < fraction.size(); ++i) {
    REQUIRE(fraction[i] >= fraction[i - 1]);
  }
  REQUIRE(fraction[3] >= 0.999);  // epsilon = D bits swallows the mass
  for (std::size_t i = 0; i < fraction.size(); ++i) {
    REQUIRE(std::abs(fraction[i] - theory[i]) < 0.01);
  }
  const AnnulusBounds at5 = annulus_bounds(20, 1.0, 5.0);
  REQUIRE(r_min[2] == Catch::Approx(at5.r_min).epsilon(1e-13));
  REQUIRE(r_max[2] == Catch::Approx(at5.r_max).epsilon(1e-13));
  REQUIRE_THROWS_AS(typical_set_coverage_experiment(20, 100, {}, 1),
                    std::domain_error);
  REQUIRE_THROWS_AS(typical_set_coverage_experiment(20, 100, {-1.0}, 1),
                    std::domain_error);
}

TEST_CASE("being average everywhere is vanishingly rare") {
  // Half-width chosen so each coordinate is within the band with
  // probability 0.3; across 10 independent coordinates the joint count over
  // 4063 draws is expected to be ~0.02.
  const double band = 0.38532046640756773;
  const ExperimentReport report =
      within_band_of_mean_experiment(10, 4063, band, 42);
  REQUIRE(report.summary["expected_per_coordinate"].get<double>() ==
          Catch::Approx(0.3).margin(1e-12));
  REQUIRE(report.summary["per_coordinate_fraction"].get<double>() ==
          Catch::Approx(0.3).margin(0.01));
  REQUIRE(report.summary["predicted_joint_count"].get<double>() ==
          Catch::Approx(0.024).margin(0.005));
  REQUIRE(report.summary["joint_count"].get<double>() <= 2.0);

  const auto& per_coord = column(report, "per_coordinate", "fraction_within");
  REQUIRE(per_coord.size() == 10);
  const double joint = report.summary["joint_fraction"].get<double>();
  for (double f : per_coord) {
    REQUIRE(joint <= f);
  }
  REQUIRE_THROWS_AS(within_band_of_mean_experiment(10, 100, 0.0, 1),
                    std::domain_error);
  REQUIRE_THROWS_AS(within_band_of_mean_experiment(10, 100, 1.0, 1),
                    std::domain_error);
}

TEST_CASE("in one dimension joint and per-coordinate fractions coincide") {
  const ExperimentReport report =
      within_band_of_mean_experiment(1, 2000, 0.3, 9);
  REQUIRE(report.summary["joint_fraction"].get<double>() ==
          Catch::Approx(report.summary["per_coordinate_fraction"].get<double>())
              .margin(1e-12));
}

TEST_CASE("planted vertical line in two dimensions") {
  const ExperimentReport report = planted_outlier_experiment_2d(42);
  REQUIRE(report.summary["count_mahalanobis_only"].get<std::size_t>() == 0);
  REQUIRE(report.summary["planted_total"].get<std::size_t>() == 17);

  const auto& y = column(report, "verdicts", "y");
  const auto& x = column(report, "verdicts", "x");
  const auto& cat = column(report, "verdicts", "category_code");
  const auto& planted = column(report, "verdicts", "planted");
  REQUIRE(y.size() == 142);

  std::size_t planted_inliers = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (planted[i] != 1.0) continue;
    REQUIRE(x[i] == 0.0);
    if (std::abs(y[i]) >= 3.5) {
      REQUIRE(cat[i] == 1.0);  // flagged by both methods
    }
    if (cat[i] == 0.0) ++planted_inliers;
  }
  // Points with y near zero sit well inside the cloud.
  REQUIRE(planted_inliers >= 3);

  // Determinism across invocations.
  const ExperimentReport again = planted_outlier_experiment_2d(42);
  REQUIRE(to_json(report).dump() == to_json(again).dump());
}

TEST_CASE("planted near-mean points in twenty dimensions") {
  const ExperimentReport report = planted_outlier_experiment_highdim(42);
  REQUIRE(report.summary["typicality_recall_planted"].get<double>() == 1.0);
  REQUIRE(report.summary["mahalanobis_recall_planted"].get<double>() == 0.0);
  REQUIRE(report.summary["count_both"].get<std::size_t>() >= 50);
  REQUIRE(column(report, "verdicts", "index").size() == 1400);

  const auto& norms = column(report, "verdicts", "norm");
  const auto& planted = column(report, "verdicts", "planted");
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (planted[i] == 1.0) {
      REQUIRE(norms[i] <= 0.5);
    }
  }
}
