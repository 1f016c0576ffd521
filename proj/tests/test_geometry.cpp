#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <typicality/geometry.hpp>

using namespace typicality;

TEST_CASE("unit ball volumes in low dimension") {
  REQUIRE(hypersphere_volume(1) == Catch::Approx(2.0).epsilon(1e-13));
  REQUIRE(hypersphere_volume(2) ==
          Catch::Approx(std::numbers::pi).epsilon(1e-13));
  REQUIRE(hypersphere_volume(3) ==
          Catch::Approx(4.1887902047863910).epsilon(1e-13));
  REQUIRE(hypersphere_volume(20) ==
          Catch::Approx(0.025806891390014060).epsilon(1e-12));
}

TEST_CASE("ball volume scales as radius to the D") {
  REQUIRE(hypersphere_volume(3, 2.0) ==
          Catch::Approx(8.0 * hypersphere_volume(3)).epsilon(1e-13));
  REQUIRE(hypersphere_volume(7, 0.5) ==
          Catch::Approx(hypersphere_volume(7) / 128.0).epsilon(1e-13));
}

TEST_CASE("hypercube volume") {
  REQUIRE(hypercube_volume(3, 2.0) == Catch::Approx(8.0).epsilon(1e-14));
  REQUIRE(hypercube_volume(10, 1.0) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cube to sphere ratio point values") {
  REQUIRE(cube_sphere_ratio(1) == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(std::abs(cube_sphere_ratio(2) - 4.0 / std::numbers::pi) < 1e-10);
  REQUIRE(cube_sphere_ratio(3) > 1.89);
  REQUIRE(cube_sphere_ratio(3) < 1.91);
  REQUIRE(cube_sphere_ratio(20) > 4e7);
  REQUIRE(cube_sphere_ratio(20) ==
          Catch::Approx(40631627.581683278).epsilon(1e-10));
}

TEST_CASE("ratio keeps growing in log space far past double range") {
  double previous = log_cube_sphere_ratio(1);
  for (Eigen::Index d = 2; d <= 1000; ++d) {
    const double current = log_cube_sphere_ratio(d);
    REQUIRE(current > previous);
    REQUIRE(std::isfinite(current));
    previous = current;
  }
  // The plain ratio is +inf up there, which is exactly why the log form exists.
  REQUIRE(std::isinf(cube_sphere_ratio(800)));
}

TEST_CASE("unit ball volume peaks at dimension five") {
  const auto curve = volume_curve(30);
  Eigen::Index argmax = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].sphere_volume > curve[static_cast<std::size_t>(argmax)].sphere_volume) {
      argmax = static_cast<Eigen::Index>(i);
    }
  }
  REQUIRE(curve[static_cast<std::size_t>(argmax)].dimension == 5);
}

TEST_CASE("expected norm exact values") {
  REQUIRE(expected_norm(1).exact ==
          Catch::Approx(0.79788456080286536).epsilon(1e-13));
  REQUIRE(expected_norm(10).exact ==
          Catch::Approx(3.0843277597998639).epsilon(1e-13));
  REQUIRE(expected_norm(100).exact ==
          Catch::Approx(9.9750316395510509).epsilon(1e-13));
  REQUIRE(expected_norm(100, 2.0).exact ==
          Catch::Approx(2.0 * 9.9750316395510509).epsilon(1e-13));
  REQUIRE(expected_norm(100).asymptotic == Catch::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("mean norm sits below the sqrt(D) shell and approaches it") {
  double previous_gap = 1.0;
  for (Eigen::Index d = 1; d <= 200; ++d) {
    const ExpectedNorm norm = expected_norm(d);
    REQUIRE(norm.exact < norm.asymptotic);
    const double gap = norm.asymptotic - norm.exact;
    REQUIRE(gap < previous_gap);
    previous_gap = gap;
  }
}

TEST_CASE("geometry rejects bad arguments") {
  REQUIRE_THROWS_AS(hypersphere_volume(0), std::domain_error);
  REQUIRE_THROWS_AS(hypersphere_volume(3, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(hypercube_volume(3, -1.0), std::domain_error);
  REQUIRE_THROWS_AS(expected_norm(0), std::domain_error);
  REQUIRE_THROWS_AS(expected_norm(3, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(volume_curve(0), std::domain_error);
}
