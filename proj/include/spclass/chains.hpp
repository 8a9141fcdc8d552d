#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace spclass {

// Provenance and diagnostics for one MCMC run.
struct ChainMeta {
  std::string model;  // "probit" | "lowrank" | "sglm" | "sglmm"
  int iters = 0;
  int burn_in = 0;
  int thin = 1;
  unsigned long long seed = 0;
  unsigned long long stream = 0;
  int n = 0;
  int n_train = 0;
  int n_test = 0;
  int ell = 0;           // design columns (intercept included)
  int basis_rank = 0;    // low-rank spatial basis columns (0 otherwise)
  double kappa_fixed = -1.0;  // >= 0 when kappa was clamped
  double rho_acceptance = -1.0;
  double kappa_acceptance = -1.0;
  double rho_proposal_sd = 0.0;
  double kappa_proposal_sd = 0.0;
  double wall_time_sec = 0.0;
  std::vector<int> train_indices;
  std::vector<int> test_indices;
  std::map<std::string, double> geweke_z;  // scalar chain name -> z score
  std::vector<std::string> geweke_flags;   // chains with |z| > 4 (or undefined z)
};

// Retained posterior draws.  Rows index retained iterations.  rho and kappa
// are empty when the model has no such parameter (kappa is also empty when
// it was clamped).  z_train holds the latent variables at training sites,
// z_test the per-iteration predictive latent draws at held-out sites; both
// are stored in the order given by meta.train_indices / meta.test_indices.
struct PosteriorSamples {
  Eigen::MatrixXd beta;    // T x (ell + basis_rank)
  Eigen::VectorXd rho;     // T or empty
  Eigen::VectorXd kappa;   // T or empty
  Eigen::VectorXd gamma2;  // T
  Eigen::MatrixXd z_test;  // T x n_test
  Eigen::MatrixXd z_train; // T x n_train (may have 0 cols if not stored)
  ChainMeta meta;

  int draws() const { return static_cast<int>(beta.rows()); }
};

// Serialization: meta.json holds ChainMeta; chains.jsonl holds one JSON
// object per retained iteration with fields beta, rho, kappa, gamma2,
// z_test (rho/kappa omitted when absent) plus z_train when stored.
void write_meta_json(const std::string& path, const ChainMeta& meta);
ChainMeta read_meta_json(const std::string& path);
void write_chains_jsonl(const std::string& path, const PosteriorSamples& s);
// Requires the meta (for sizes/model); validates field presence per model.
PosteriorSamples read_chains_jsonl(const std::string& chains_path, const ChainMeta& meta);

}  // namespace spclass
