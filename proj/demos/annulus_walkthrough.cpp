// How geometry pushes the typical set away from the mode as dimension grows:
// prints the annulus radii and whether the mean itself is still typical.

#include <iostream>
#include <typicality/typicality.hpp>

int main() {
  using namespace typicality;
  const double epsilon = kDefaultEpsilonBits;

  std::cout << "epsilon = " << epsilon << " bits\n";
  std::cout << "D, r_min, r_max, mean_norm, mean_typical\n";
  for (Eigen::Index d : {1, 2, 5, 10, 20, 50, 100}) {
    const GaussianModel model = model_from_moments(
        Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d),
        Estimator::Known);
    const AnnulusBounds bounds = annulus_bounds(d, 1.0, epsilon);
    const TypicalityBand band = typicality_band(model, epsilon);
    const double log2p_at_mean = log2_density_multivariate(model.mean, model);
    std::cout << d << ", " << bounds.r_min << ", " << bounds.r_max << ", "
              << expected_norm(d).exact << ", "
              << (band.contains(log2p_at_mean) ? "yes" : "no") << '\n';
  }
  return 0;
}
