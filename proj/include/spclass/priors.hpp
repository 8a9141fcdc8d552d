#pragma once

#include <Eigen/Dense>
#include <optional>

#include "spclass/errors.hpp"

namespace spclass {

// Prior specification for the Bayesian probit fitters.
//
//   beta       ~ N(0, V_beta)        with V_beta = beta_var * I by default,
//                                    or the explicit matrix in beta_cov
//   gamma^2    ~ gamma_scale / chi^2_{gamma_df}   (working scale parameter)
//   rho        ~ Uniform(rho_lower, rho_upper)    (spatial dependence)
//   kappa      ~ Uniform(0, 1)                    (spatial variance fraction)
//
// basis_var is the prior variance of the coefficients attached to the
// low-rank spatial basis columns (they get basis_var * I rather than
// beta_var * I).
struct PriorSpec {
  double beta_var = 10.0;
  std::optional<Eigen::MatrixXd> beta_cov;  // overrides beta_var when set
  double gamma_df = 3.0;
  double gamma_scale = 3.0;
  double rho_lower = 0.0;
  double rho_upper = 1.0;
  double basis_var = 100.0;

  void validate() const {
    if (!(beta_var > 0.0)) throw validation_error("priors: beta_var must be positive");
    if (!(gamma_df > 0.0) || !(gamma_scale > 0.0))
      throw validation_error("priors: gamma_df and gamma_scale must be positive");
    if (!(rho_lower >= 0.0 && rho_lower < rho_upper && rho_upper <= 1.0))
      throw validation_error("priors: need 0 <= rho_lower < rho_upper <= 1");
    if (!(basis_var > 0.0)) throw validation_error("priors: basis_var must be positive");
    if (beta_cov) {
      if (beta_cov->rows() != beta_cov->cols())
        throw validation_error("priors: beta_cov must be square");
      Eigen::LLT<Eigen::MatrixXd> llt(*beta_cov);
      if (llt.info() != Eigen::Success)
        throw validation_error("priors: beta_cov must be positive definite");
    }
  }

  // V_beta for an ell-column design; validates dimension when an explicit
  // covariance was supplied.
  Eigen::MatrixXd beta_cov_for(int ell) const {
    if (beta_cov) {
      if (beta_cov->rows() != ell)
        throw validation_error("priors: beta_cov dimension does not match design columns");
      return *beta_cov;
    }
    return beta_var * Eigen::MatrixXd::Identity(ell, ell);
  }
};

}  // namespace spclass
