#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spclass/grid.hpp"
#include "spclass/rng.hpp"

namespace spclass {

enum class CovKind { car, exponential, identity };

struct CovarianceSpec {
    CovKind kind = CovKind::car;
    double rho = 0.0;     // CAR dependence, in [0,1)
    double range = 1.0;   // exponential correlation range, > 0
    double kappa = 1.0;   // spatial fraction of marginal latent variance, in [0,1]
    double gamma2 = 1.0;  // working variance, > 0
};

// CAR dependence matrix K(rho) = (I - rho*Ws)^{-1} with Ws = D^{-1/2} A D^{-1/2}
// the degree-symmetrized weights. Ws shares its spectrum with the row-standardized
// W = D^{-1}A, and K equals (I - rho*W)^{-1} exactly whenever all neighbor counts
// agree; unlike the additive average (K + K')/2, this symmetrization stays
// positive definite for every rho < 1 (the additive form loses definiteness on
// lattices once rho is close to 1). W must be the row standardization of a
// symmetric binary adjacency so that adjacency and degrees are recoverable.
Eigen::MatrixXd car_dependence(const Eigen::MatrixXd& W, double rho);

// Ws = D^{-1/2} A D^{-1/2} from a binary adjacency (isolated sites keep a
// unit degree so the matrix stays well defined).
Eigen::MatrixXd symmetrized_weights(const Eigen::MatrixXd& A);

// Spectral form of the CAR dependence for one neighborhood, letting K(rho) and
// its sub-blocks be rebuilt per Metropolis proposal without a fresh n^3 inverse:
// K(rho) = V diag(1/(1-rho*lambda)) V' from one eigendecomposition of Ws.
class CarSpectral {
public:
    explicit CarSpectral(const NeighborhoodMatrix& nb);

    int n() const { return static_cast<int>(V_.rows()); }

    // Full K(rho).
    Eigen::MatrixXd dependence(double rho) const;

    // Sub-block K(rho)[rows, cols].
    Eigen::MatrixXd dependence_block(double rho, const std::vector<int>& rows,
                                     const std::vector<int>& cols) const;

    // diag(K(rho))[idx].
    Eigen::VectorXd dependence_diag(double rho, const std::vector<int>& idx) const;

    // log det K(rho); free given the spectrum.
    double log_det(double rho) const;

    // One draw e ~ N(0, gamma2 * ((1-kappa) I + kappa K(rho))) through the
    // spectral square root: e = gamma * V (s .* xi) with
    // s_i = sqrt((1-kappa) + kappa/(1 - rho*lambda_i)). Consumes exactly n
    // standard normals.
    Eigen::VectorXd sample_sigma_star(double rho, double kappa, double gamma2,
                                      RngStream& rng) const;

private:
    Eigen::VectorXd scale_factors(double rho) const;

    Eigen::MatrixXd V_;    // eigenvectors of Ws = D^{-1/2} A D^{-1/2}
    Eigen::VectorXd lam_;  // matching eigenvalues, each in [-1, 1]
};

// gamma2 * ((1-kappa)*I + kappa*K). kappa=0 is the independent-probit limit,
// kappa=1 the purely spatial limit.
Eigen::MatrixXd assemble_sigma_star(const Eigen::MatrixXd& K, double kappa, double gamma2);

// exp(-d/theta) on Euclidean distance between lattice coordinates.
Eigen::MatrixXd exponential_correlation(const std::vector<GridCoord>& coords, double theta);

struct ConditionalNormal {
    double mean = 0.0;
    double var = 0.0;
};

// Conditional law of coordinate 0 given coordinates 1..n of a joint Gaussian.
ConditionalNormal conditional_normal(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                     const Eigen::VectorXd& observed);

}  // namespace spclass
