#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spclass/chains.hpp"
#include "spclass/covariance.hpp"
#include "spclass/dataset.hpp"
#include "spclass/grid.hpp"
#include "spclass/priors.hpp"
#include "spclass/rng.hpp"

namespace spclass {

// probit  : independent latent errors (no spatial term)
// lowrank : independent errors plus a reduced-rank spatial basis in the design
// sglm    : latent covariance K(rho), purely spatial (kappa = 1)
// sglmm   : latent covariance (1-kappa) I + kappa K(rho), kappa free in [0,1]
enum class SpatialModel { probit, lowrank, sglm, sglmm };

std::string model_name(SpatialModel m);
SpatialModel model_from_name(const std::string& name);

struct McmcSettings {
  int iters = 20000;
  int burn_in = -1;  // negative: iters / 2
  int thin = 1;
  unsigned long long seed = 0;
  unsigned long long stream = 0;
  double rho_proposal_sd = 0.05;
  double kappa_proposal_sd = 0.10;
  // When set, proposal scales are tuned toward a 0.3-0.5 acceptance rate
  // during the first half of burn-in and frozen well before retention.
  bool adapt_proposals = true;
  bool store_train_latents = true;
  NeighborOrder neighbor_order = NeighborOrder::second;

  int effective_burn_in() const { return burn_in >= 0 ? burn_in : iters / 2; }
  void validate() const;
};

// Everything the classification/evaluation layer needs beyond the chains:
// the fitted data with its split, the spatial machinery, and the reduced-rank
// basis when one was used.
struct FitArtifacts {
  SpatialModel model = SpatialModel::probit;
  Dataset data;
  std::vector<int> train_idx;
  std::vector<int> test_idx;
  std::shared_ptr<const CarSpectral> spectral;  // null for probit
  Eigen::MatrixXd weights_sym;                  // Ws over the full grid (empty for probit)
  Eigen::MatrixXd psi;                          // n x r basis (lowrank; n x 0 otherwise)
  PriorSpec priors;
  McmcSettings settings;
  double kappa_fixed = -1.0;  // >= 0 when kappa was clamped (sglm stores 1)

  // Design row including basis columns for site i.
  Eigen::VectorXd design_row(int i) const;
  // kappa value to use for draw t (fixed value or the chain entry).
  double kappa_at(const PosteriorSamples& s, int t) const;
};

struct FitResult {
  PosteriorSamples samples;
  FitArtifacts artifacts;
};

// Independent-error Bayesian probit via latent-variable Gibbs sampling with a
// redrawn working scale each sweep.
FitResult fit_indep_probit(const Dataset& data, const PriorSpec& priors,
                           const McmcSettings& mcmc);

// Same sampler over the augmented design [X Psi], with Psi the top Moran
// eigenvectors of the full-grid adjacency (r = ceil(r_frac * n)). r_frac = 0
// reduces exactly to fit_indep_probit.
FitResult fit_lowrank(const Dataset& data, const PriorSpec& priors, double r_frac,
                      const McmcSettings& mcmc);

// Purely spatial latent covariance K(rho) with a Metropolis step for rho.
FitResult fit_sglm(const Dataset& data, const PriorSpec& priors, const McmcSettings& mcmc);

// Mixed latent covariance (1-kappa) I + kappa K(rho) with Metropolis steps
// for both rho and kappa.
FitResult fit_sglmm(const Dataset& data, const PriorSpec& priors, const McmcSettings& mcmc);

// fit_sglmm with kappa clamped to a fixed value in [0, 1]; the kappa chain is
// omitted and meta.kappa_fixed records the clamp. kappa = 1 coincides with
// fit_sglm; kappa = 0 is distributionally the independent probit.
FitResult fit_sglmm_fixed_kappa(const Dataset& data, const PriorSpec& priors, double kappa,
                                const McmcSettings& mcmc);

// Per-retained-iteration draws of the latent variable at one site,
// conditioned on that iteration's parameters and stored training latents.
// Works for any site index (train or test); a training focal site reproduces
// its own stored latent values with zero conditional variance when kappa = 1.
Eigen::VectorXd predict_latent(const PosteriorSamples& samples, const FitArtifacts& artifacts,
                               int focal_index, RngStream& rng);

// Schur-complement machinery for the training-site block of the latent
// covariance Sigma* = (1-kappa) I + kappa K(rho) over a split grid.  K's
// train block is never inverted directly: with P(rho) = I - rho Ws the
// full-grid precision, S = P_oo - P_ou P_uu^{-1} P_uo satisfies
// S = (K_oo)^{-1}, so Sigma*_oo = S^{-1} T with T = (1-kappa) S + kappa I,
// giving log-determinants and quadratic forms from factorizations of sizes
// n_test and n_train only.  evaluate() prices a Metropolis proposal without
// building the conditioning cache; commit()+finalize() adopt a state and
// build Q = (Sigma*_oo)^{-1}, the held-out conditional weights B (row u of B
// dotted with the training residual gives site u's conditional mean shift),
// and the held-out conditional variances s2.
class TrainCov {
 public:
  struct Eval {
    double log_det = 0.0;  // log |Sigma*_oo|
    double quad = 0.0;     // r' (Sigma*_oo)^{-1} r
    bool ok = false;       // false: proposal numerically inadmissible
  };

  TrainCov(std::shared_ptr<const CarSpectral> spectral, const Eigen::MatrixXd& weights_sym,
           std::vector<int> train, std::vector<int> test);

  Eval evaluate(double rho, double kappa, const Eigen::VectorXd& r);
  void commit();    // adopt the last successful evaluate()'s state
  void finalize();  // build Q, B, s2 at the committed state
  void rebuild(double rho, double kappa);  // evaluate + commit + finalize

  double rho() const { return cur_.rho; }
  double kappa() const { return cur_.kappa; }
  double log_det() const { return cur_.logdet_sigma; }
  double quad(const Eigen::VectorXd& r) const;  // at the finalized state
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const Eigen::VectorXd& s2() const { return s2_; }
  int n_train() const { return nt_; }
  int n_test() const { return nu_; }

 private:
  struct State {
    double rho = -1.0;
    double kappa = -1.0;
    bool s_materialized = false;
    Eigen::MatrixXd S;         // (K_oo)^{-1}
    Eigen::MatrixXd G0;        // P_uu^{-1} Ws_uo (rho-dependent)
    Eigen::LLT<Eigen::MatrixXd> F_uu;  // LLT of P_uu
    Eigen::LLT<Eigen::MatrixXd> F_T;   // LLT of T (kappa < 1 only)
    double logdet_S = 0.0;
    double logdet_T = 0.0;
    double logdet_sigma = 0.0;
  };

  bool build_S(State& st, double rho);        // returns false if inadmissible
  void materialize_S(State& st);              // fill S/G0 when skipped

  std::shared_ptr<const CarSpectral> spec_;
  std::vector<int> train_, test_;
  int nt_ = 0, nu_ = 0;
  Eigen::MatrixXd Ws_oo_, Ws_uo_, Ws_uu_;
  // nonzeros of Ws_ou as (train position, test position, weight)
  std::vector<std::array<double, 3>> ou_nz_;

  State cur_, pend_;
  bool pend_valid_ = false;
  bool pend_reuses_S_ = false;
  Eigen::MatrixXd Q_, B_;
  Eigen::VectorXd s2_;
  bool finalized_ = false;
};

}  // namespace spclass
