#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spclass/chains.hpp"
#include "spclass/probit_fit.hpp"
#include "spclass/rng.hpp"

namespace spclass {

// Error rates for one classifier on one dataset. A negative rate means the
// metric does not apply (the training-latent metrics exist only for the
// Bayesian latent-variable classifiers).
struct ErrorReport {
  std::string classifier;
  double training_error_oaat = -1.0;
  double training_error_joint = -1.0;
  double test_error = -1.0;
  int n_train = 0;
  int n_test = 0;
  std::vector<std::string> geweke_flags;
  double wall_time_sec = 0.0;
};

void write_error_reports_json(const std::string& path, const std::vector<ErrorReport>& reports);
std::vector<ErrorReport> read_error_reports_json(const std::string& path);

// Flat comparison-table rows: one row per populated metric, columns
// linear_component,dataset,kappa,model_fit,metric,rate
std::string report_csv_header();
void append_report_rows(std::ostream& os, const std::string& linear_component, int dataset,
                        double kappa, const ErrorReport& rep);

// Fraction of disagreements; lengths must match and labels must be 0/1.
double test_error(const std::vector<int>& predictions, const std::vector<int>& truth);

// Posterior-predictive class labels at the held-out sites from the stored
// per-iteration latent draws: site u is classified 1 iff more than half of
// its draws are positive.
std::vector<int> classify_test_sites(const PosteriorSamples& samples);

// Test error of the posterior-predictive classification against the recorded
// responses at the held-out sites; throws if any held-out response is
// unrecorded.
double spatial_test_error(const PosteriorSamples& samples, const FitArtifacts& artifacts);

// Training error where each training site's latent variable is re-drawn, per
// retained iteration, from its Gaussian conditional given the OTHER training
// sites' stored latent draws at that iteration's dependence parameters
// (un-truncated: the site's own observed class is ignored). The site is then
// classified by the fraction of positive re-draws. For the independent-error
// models the conditional collapses to N(x_i' beta^[t], 1).
double one_at_a_time_training_error(const PosteriorSamples& samples,
                                    const FitArtifacts& artifacts, RngStream& rng);

// Training error where a fresh joint latent vector is drawn per retained
// iteration from N(X beta^[t], Sigma*(rho^[t], kappa^[t])), ignoring the
// observed classes entirely, and each site is classified by its fraction of
// positive draws.
double joint_training_error(const PosteriorSamples& samples, const FitArtifacts& artifacts,
                            RngStream& rng);

}  // namespace spclass
