#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include <typicality/gaussian.hpp>
#include <typicality/simulation.hpp>

using namespace typicality;

namespace {

GaussianModel known_2d() {
  Eigen::VectorXd mean(2);
  mean << 0.5, 0.0;
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.5, 0.5, 1.0;
  return model_from_moments(mean, cov, Estimator::Known);
}

}  // namespace

TEST_CASE("univariate entropy of the standard normal") {
  REQUIRE(entropy_univariate(1.0) ==
          Catch::Approx(2.0470955851806411).epsilon(1e-14));
  // Quadrupling the variance adds exactly one bit.
  REQUIRE(entropy_univariate(4.0) - entropy_univariate(1.0) ==
          Catch::Approx(1.0).epsilon(1e-13));
  REQUIRE_THROWS_AS(entropy_univariate(0.0), std::domain_error);
  REQUIRE_THROWS_AS(entropy_univariate(-1.0), std::domain_error);
}

TEST_CASE("univariate log2 density at the mode") {
  REQUIRE(log2_density_univariate(0.0, 0.0, 1.0) ==
          Catch::Approx(-1.3257480647361594).epsilon(1e-14));
  // One standard deviation out costs log2(e)/2 bits.
  REQUIRE(log2_density_univariate(0.0, 0.0, 1.0) -
              log2_density_univariate(1.0, 0.0, 1.0) ==
          Catch::Approx(0.5 * 1.4426950408889634).epsilon(1e-13));
}

TEST_CASE("multivariate entropy of the identity covariance") {
  for (Eigen::Index d : {1, 2, 10, 50, 100}) {
    REQUIRE(entropy_multivariate(Eigen::MatrixXd::Identity(d, d)) ==
            Catch::Approx(static_cast<double>(d) * 2.0470955851806411)
                .epsilon(1e-10));
  }
}

TEST_CASE("known 2-D model caches the right quantities") {
  const GaussianModel model = known_2d();
  REQUIRE(model.log2_det == Catch::Approx(0.8073549220576041).epsilon(1e-13));
  REQUIRE(model.entropy_bits ==
          Catch::Approx(4.4978686313900843).epsilon(1e-13));
  REQUIRE(model.estimator == Estimator::Known);
  REQUIRE_FALSE(model.regularized);
  REQUIRE((model.chol_factor * model.chol_factor.transpose() - model.covariance)
              .norm() < 1e-12);
}

TEST_CASE("multivariate log2 density matches a hand-solved case") {
  const GaussianModel model = known_2d();
  Eigen::VectorXd point(2);
  point << 1.0, -1.0;
  REQUIRE(log2_density_multivariate(point, model) ==
          Catch::Approx(-4.1887196940567350).epsilon(1e-13));
}

TEST_CASE("density at the mean sits (D/2)log2(e) bits above -H") {
  for (Eigen::Index d : {1, 2, 5, 10, 50, 100}) {
    const GaussianModel model = model_from_moments(
        Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d),
        Estimator::Known);
    const double log2p_mean = log2_density_multivariate(model.mean, model);
    const double expected =
        -(model.entropy_bits - 0.5 * static_cast<double>(d) * kLog2E);
    REQUIRE(log2p_mean == Catch::Approx(expected).margin(1e-10));
  }
}

TEST_CASE("model_from_moments validates its inputs") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  REQUIRE_THROWS_AS(
      model_from_moments(Eigen::VectorXd::Zero(2), asym, Estimator::Known),
      std::domain_error);
  REQUIRE_THROWS_AS(model_from_moments(Eigen::VectorXd::Zero(3),
                                       Eigen::MatrixXd::Identity(2, 2),
                                       Estimator::Known),
                    std::domain_error);
  REQUIRE_THROWS_AS(model_from_moments(Eigen::VectorXd(), Eigen::MatrixXd(),
                                       Estimator::Known),
                    std::domain_error);
}

TEST_CASE("positive semidefinite covariance is rescued by the ridge") {
  Eigen::MatrixXd psd(2, 2);
  psd << 1.0, 1.0, 1.0, 1.0;  // rank 1
  const GaussianModel model =
      model_from_moments(Eigen::VectorXd::Zero(2), psd, Estimator::Sample);
  REQUIRE(model.regularized);
  REQUIRE(std::isfinite(model.entropy_bits));
  REQUIRE(model.covariance(0, 0) > 1.0);
}

TEST_CASE("indefinite covariance still fails after the ridge") {
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  REQUIRE_THROWS_AS(model_from_moments(Eigen::VectorXd::Zero(2), indefinite,
                                       Estimator::Known),
                    SingularMatrixError);
}

TEST_CASE("sample fit recovers known moments") {
  Eigen::MatrixXd cov(3, 3);
  cov << 2.0, 0.3, 0.0, 0.3, 1.0, -0.2, 0.0, -0.2, 0.5;
  Eigen::VectorXd mean(3);
  mean << 1.0, -2.0, 0.5;
  const DataMatrix data = sample_gaussian(20000, mean, cov, 99);
  const GaussianModel model = fit_gaussian(data, Estimator::Sample);
  REQUIRE(model.estimator == Estimator::Sample);
  REQUIRE((model.mean - mean).cwiseAbs().maxCoeff() < 0.05);
  REQUIRE((model.covariance - cov).cwiseAbs().maxCoeff() < 0.06);
}

TEST_CASE("sample fit on n <= D is rejected as ill-posed") {
  const DataMatrix data = sample_gaussian(
      3, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3), 1);
  REQUIRE_THROWS_AS(fit_gaussian(data, Estimator::Sample), std::domain_error);
}

TEST_CASE("Known is not a fit") {
  const DataMatrix data = sample_gaussian(
      10, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 1);
  REQUIRE_THROWS_AS(fit_gaussian(data, Estimator::Known), std::invalid_argument);
}

TEST_CASE("empirical entropy converges to the analytic value") {
  const Eigen::Index d = 10;
  const GaussianModel model = model_from_moments(
      Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d),
      Estimator::Known);
  const DataMatrix draws =
      sample_gaussian(10000, model.mean, model.covariance, 4242);
  const double empirical = empirical_entropy_estimate(draws.values, model);
  REQUIRE(std::abs(empirical - model.entropy_bits) < 0.1);
}

TEST_CASE("density rejects mismatched dimensions") {
  const GaussianModel model = known_2d();
  REQUIRE_THROWS_AS(
      log2_density_multivariate(Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 3)),
                                model),
      std::domain_error);
}
