#pragma once

#include <Eigen/Dense>
#include <functional>

#include "spclass/rng.hpp"

namespace spclass {

// Draw from N(mu, sigma2) restricted to (lower, upper); bounds may be infinite.
// Inverse-CDF in the central region, exponential rejection in far tails, so the
// draw stays strictly inside its bounds even 8+ sd from mu.
double truncated_normal_sample(double mu, double sigma2, double lower, double upper,
                               RngStream& rng);

// b * (chi^2_a)^{-1}.
double scaled_inv_chisq_sample(double a, double b, RngStream& rng);

// Gamma(shape, scale=1) via Marsaglia-Tsang; building block for chi^2 / Wishart.
double gamma_sample(double shape, RngStream& rng);

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                           RngStream& rng);

// Variant reusing a precomputed Cholesky factor of the covariance.
Eigen::VectorXd mvn_sample_chol(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_lower,
                                RngStream& rng);

struct MetropolisState {
    double current = 0.0;
    double proposal_sd = 0.05;
    long accepts = 0;
    long attempts = 0;

    double acceptance_rate() const {
        return attempts > 0 ? static_cast<double>(accepts) / attempts : 0.0;
    }
};

// One random-walk step with support (lower, upper). Proposals outside the
// support or with NaN log target are rejected. Returns whether the move was
// accepted. `current_log_target` is updated in place so callers with expensive
// targets evaluate only the proposal.
bool rw_metropolis_step(MetropolisState& state,
                        const std::function<double(double)>& log_target,
                        double& current_log_target, double lower, double upper, RngStream& rng);

// Convenience overload evaluating the target at the current point too.
bool rw_metropolis_step(MetropolisState& state,
                        const std::function<double(double)>& log_target, double lower,
                        double upper, RngStream& rng);

// Geweke convergence diagnostic comparing the first and last segments of a
// chain, with spectral-density-at-zero variance (Bartlett window, width
// floor(sqrt(segment length))). Throws numeric_error for degenerate segments.
double geweke_z(const Eigen::VectorXd& chain, double first_frac = 0.1, double last_frac = 0.5);

}  // namespace spclass
