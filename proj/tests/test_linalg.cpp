#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include <typicality/errors.hpp>
#include <typicality/linalg.hpp>

using namespace typicality;

TEST_CASE("cholesky of a known SPD matrix") {
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 2.0, 2.0, 3.0;
  const Eigen::MatrixXd lower = cholesky_lower(m);
  REQUIRE(lower(0, 0) == Catch::Approx(2.0).epsilon(1e-14));
  REQUIRE(lower(0, 1) == 0.0);
  REQUIRE(lower(1, 0) == Catch::Approx(1.0).epsilon(1e-14));
  REQUIRE(lower(1, 1) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
  REQUIRE(((lower * lower.transpose()) - m).norm() < 1e-12);
}

TEST_CASE("cholesky of the identity is the identity") {
  const Eigen::MatrixXd lower = cholesky_lower(Eigen::MatrixXd::Identity(5, 5));
  REQUIRE((lower - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-14);
}

TEST_CASE("cholesky reads only the lower triangle") {
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 999.0, 2.0, 3.0;
  const Eigen::MatrixXd lower = cholesky_lower(m);
  REQUIRE(lower(1, 1) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("singular matrix reports the failing pivot") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 1.0, 1.0, 1.0;
  try {
    cholesky_lower(m);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    REQUIRE(e.pivot() == 1);
  }

  Eigen::MatrixXd negative(1, 1);
  negative << -1.0;
  try {
    cholesky_lower(negative);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    REQUIRE(e.pivot() == 0);
  }
}

TEST_CASE("log determinant from the factor") {
  Eigen::MatrixXd m(2, 2);
  m << 4.0, 2.0, 2.0, 3.0;  // det = 8
  const Eigen::MatrixXd lower = cholesky_lower(m);
  REQUIRE(log_det_from_cholesky(lower) ==
          Catch::Approx(std::log(8.0)).epsilon(1e-14));
  REQUIRE(log2_det_from_cholesky(lower) == Catch::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("squared mahalanobis under the identity is squared distance") {
  Eigen::MatrixXd points(2, 2);
  points << 3.0, 4.0, 0.0, 0.0;
  const Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  const Eigen::MatrixXd lower = cholesky_lower(Eigen::MatrixXd::Identity(2, 2));
  const Eigen::VectorXd d2 = squared_mahalanobis(points, mean, lower);
  REQUIRE(d2[0] == Catch::Approx(25.0).epsilon(1e-14));
  REQUIRE(d2[1] == 0.0);
}

TEST_CASE("squared mahalanobis matches a hand-solved case") {
  // mean (0.5, 0), covariance [[2, 0.5], [0.5, 1]], point (1, -1):
  // squared distance 11/7.
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.5, 0.5, 1.0;
  Eigen::VectorXd mean(2);
  mean << 0.5, 0.0;
  Eigen::MatrixXd point(1, 2);
  point << 1.0, -1.0;
  const Eigen::VectorXd d2 =
      squared_mahalanobis(point, mean, cholesky_lower(cov));
  REQUIRE(d2[0] == Catch::Approx(1.5714285714285714).epsilon(1e-13));
}

TEST_CASE("is_symmetric tolerates rounding and rejects real asymmetry") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.5, 0.5 + 1e-12, 1.0;
  REQUIRE(is_symmetric(m));
  m(1, 0) = 0.6;
  REQUIRE_FALSE(is_symmetric(m));
}
