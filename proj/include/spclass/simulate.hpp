#pragma once

#include <string>
#include <vector>

#include "spclass/covariance.hpp"
#include "spclass/dataset.hpp"
#include "spclass/grid.hpp"
#include "spclass/rng.hpp"

namespace spclass {

// The five study designs for the linear component of the simulated latent
// field. Coefficients and covariate laws are fixed per design:
//   intercept  : 0.1
//   simple1    : 0.1 - sqrt(2) x1,                    x1 ~ U(-1/2, 1/2)
//   simple2    : 0.1 - sqrt(8) x1,                    x1 ~ U(-1/2, 1/2)
//   multiple   : 0.1 - sqrt(2) x1 + 2 x2 + 2 x3,      x1 ~ U(-1/2, 1/2),
//                                                     x2 ~ U(0, 1/2),
//                                                     x3 ~ U(-1/2, 0)
//   confounded : 0.1 - sqrt(2) x1,                    x1 ~ N(0, K(0.99))
enum class LinearComponent { intercept, simple1, simple2, multiple, confounded };

std::string linear_component_name(LinearComponent lc);
LinearComponent linear_component_from_name(const std::string& name);

// One simulation scenario: a linear component plus the latent covariance
// (1-kappa) I + kappa K(rho) scaled by gamma2, on a rows-by-cols lattice with
// a queen (second-order) neighborhood. The study baseline uses a 20x20 grid,
// rho = 0.99, gamma2 = 1, and kappa in {0.25, 0.5, 1}; kappa = 0 is allowed
// as the independent-error limit.
struct Scenario {
  LinearComponent linear_component = LinearComponent::intercept;
  double kappa = 1.0;
  double rho = 0.99;
  double gamma2 = 1.0;
  int rows = 20;
  int cols = 20;
  unsigned long long replicate_seed = 0;
  NeighborOrder neighbor_order = NeighborOrder::second;

  void validate() const;
  int n_covariates() const;
  // Coefficient vector including the intercept (length 1 + n_covariates()).
  Eigen::VectorXd coefficients() const;
};

// Draws one dataset: covariates per the scenario's design (column by column,
// sites in row-major order), then the latent noise nu + eps jointly from
// N(0, gamma2 ((1-kappa) I + kappa K(rho))) through the spectral square root,
// and sets y_i = 1 iff x_i' beta + noise_i >= 0. All sites start as training
// sites (empty test mask); apply clustered_test_split afterwards to hold data
// out. When kappa = 0 and no covariate needs K, the noise is drawn directly
// as gamma * xi without building the spectral decomposition. Passing a
// precomputed `spectral` for the scenario's grid/neighborhood skips the
// eigendecomposition; draws are identical either way.
Dataset simulate_dataset(const Scenario& sc, RngStream& rng,
                         const CarSpectral* spectral = nullptr);
// Convenience overload seeding the stream with sc.replicate_seed.
Dataset simulate_dataset(const Scenario& sc);

// Clustered hold-out pattern: picks n_seeds distinct focal cells uniformly,
// then per focal cell per_seed of its 8 queen neighbors on the unbounded
// lattice, dropping duplicates and cells outside the grid. The focal cells
// themselves are part of the test set. With the defaults on a 20x20 grid the
// expected test fraction is about 27 percent.
std::vector<char> clustered_test_split(const GridDomain& domain, int n_seeds, int per_seed,
                                       RngStream& rng);
inline std::vector<char> clustered_test_split(const GridDomain& domain, RngStream& rng) {
  return clustered_test_split(domain, 25, 4, rng);
}

// Fraction of mask entries set.
double test_fraction(const std::vector<char>& mask);

}  // namespace spclass
