#include "spclass/evaluate.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "spclass/errors.hpp"

namespace spclass {

namespace {

using nlohmann::json;

json report_to_json(const ErrorReport& r) {
  json j;
  j["classifier"] = r.classifier;
  j["training_error_oaat"] = r.training_error_oaat;
  j["training_error_joint"] = r.training_error_joint;
  j["test_error"] = r.test_error;
  j["n_train"] = r.n_train;
  j["n_test"] = r.n_test;
  j["geweke_flags"] = r.geweke_flags;
  j["wall_time_sec"] = r.wall_time_sec;
  return j;
}

ErrorReport report_from_json(const json& j) {
  ErrorReport r;
  r.classifier = j.at("classifier").get<std::string>();
  r.training_error_oaat = j.at("training_error_oaat").get<double>();
  r.training_error_joint = j.at("training_error_joint").get<double>();
  r.test_error = j.at("test_error").get<double>();
  r.n_train = j.at("n_train").get<int>();
  r.n_test = j.at("n_test").get<int>();
  r.geweke_flags = j.at("geweke_flags").get<std::vector<std::string>>();
  r.wall_time_sec = j.at("wall_time_sec").get<double>();
  return r;
}

void check_rate(double rate, const char* what) {
  if (rate >= 0.0 && !(rate <= 1.0))
    throw validation_error(std::string("error report: ") + what + " outside [0,1]");
}

}  // namespace

void write_error_reports_json(const std::string& path, const std::vector<ErrorReport>& reports) {
  json arr = json::array();
  for (const ErrorReport& r : reports) {
    check_rate(r.training_error_oaat, "training_error_oaat");
    check_rate(r.training_error_joint, "training_error_joint");
    check_rate(r.test_error, "test_error");
    arr.push_back(report_to_json(r));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot open for writing: " + path);
  out << arr.dump(2) << "\n";
}

std::vector<ErrorReport> read_error_reports_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open: " + path);
  json arr;
  try {
    in >> arr;
  } catch (const json::exception& e) {
    throw validation_error("bad error-report json in " + path + ": " + e.what());
  }
  if (!arr.is_array()) throw validation_error("error-report file must hold a json array");
  std::vector<ErrorReport> out;
  try {
    for (const json& j : arr) out.push_back(report_from_json(j));
  } catch (const json::exception& e) {
    throw validation_error("bad error-report record in " + path + ": " + e.what());
  }
  return out;
}

std::string report_csv_header() { return "linear_component,dataset,kappa,model_fit,metric,rate"; }

void append_report_rows(std::ostream& os, const std::string& linear_component, int dataset,
                        double kappa, const ErrorReport& rep) {
  auto row = [&](const char* metric, double rate) {
    if (rate < 0.0) return;  // metric not applicable
    os << linear_component << ',' << dataset << ',' << kappa << ',' << rep.classifier << ','
       << metric << ',' << rate << '\n';
  };
  row("training_error_oaat", rep.training_error_oaat);
  row("training_error_joint", rep.training_error_joint);
  row("test_error", rep.test_error);
}

double test_error(const std::vector<int>& predictions, const std::vector<int>& truth) {
  if (predictions.size() != truth.size())
    throw validation_error("test_error: prediction and truth lengths differ");
  if (predictions.empty()) throw validation_error("test_error: empty inputs");
  int wrong = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    if ((predictions[i] != 0 && predictions[i] != 1) || (truth[i] != 0 && truth[i] != 1))
      throw validation_error("test_error: labels must be 0/1");
    wrong += predictions[i] != truth[i];
  }
  return static_cast<double>(wrong) / static_cast<double>(predictions.size());
}

std::vector<int> classify_test_sites(const PosteriorSamples& s) {
  const int T = s.draws();
  if (T < 1) throw validation_error("classify_test_sites: empty chains");
  const int nu = static_cast<int>(s.z_test.cols());
  std::vector<int> labels(static_cast<size_t>(nu));
  for (int u = 0; u < nu; ++u) {
    int pos = 0;
    for (int t = 0; t < T; ++t) pos += s.z_test(t, u) > 0.0;
    labels[static_cast<size_t>(u)] = 2 * pos > T ? 1 : 0;
  }
  return labels;
}

double spatial_test_error(const PosteriorSamples& s, const FitArtifacts& art) {
  const std::vector<int> labels = classify_test_sites(s);
  if (labels.size() != art.test_idx.size())
    throw validation_error("spatial_test_error: chain and artifact test sizes differ");
  std::vector<int> truth;
  truth.reserve(labels.size());
  for (int i : art.test_idx) {
    const int yi = art.data.y[static_cast<size_t>(i)];
    if (yi < 0)
      throw validation_error("spatial_test_error: a held-out site has no recorded response");
    truth.push_back(yi);
  }
  return test_error(labels, truth);
}

namespace {

// Shared scoring: counts of positive latent draws per training site -> rate.
double classify_and_score(const std::vector<int>& pos, int T, const Dataset& d,
                          const std::vector<int>& train) {
  const int nt = static_cast<int>(train.size());
  int wrong = 0;
  for (int i = 0; i < nt; ++i) {
    const int label = 2 * pos[static_cast<size_t>(i)] > T ? 1 : 0;
    wrong += label != d.y[static_cast<size_t>(train[static_cast<size_t>(i)])];
  }
  return static_cast<double>(wrong) / static_cast<double>(nt);
}

}  // namespace

double one_at_a_time_training_error(const PosteriorSamples& s, const FitArtifacts& art,
                                    RngStream& rng) {
  const int T = s.draws();
  if (T < 1) throw validation_error("one_at_a_time_training_error: empty chains");
  const std::vector<int>& train = art.train_idx;
  const int nt = static_cast<int>(train.size());
  if (nt < 1) throw validation_error("one_at_a_time_training_error: no training sites");
  std::vector<int> pos(static_cast<size_t>(nt), 0);

  if (art.model == SpatialModel::probit || art.model == SpatialModel::lowrank) {
    Eigen::MatrixXd XH(nt, s.beta.cols());
    for (int i = 0; i < nt; ++i)
      XH.row(i) = art.design_row(train[static_cast<size_t>(i)]).transpose();
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd eta = XH * s.beta.row(t).transpose();
      for (int i = 0; i < nt; ++i)
        if (eta[i] + rng.normal() > 0.0) ++pos[static_cast<size_t>(i)];
    }
    return classify_and_score(pos, T, art.data, train);
  }

  if (s.z_train.cols() != nt)
    throw validation_error(
        "one_at_a_time_training_error: training latent draws were not stored");
  if (s.rho.size() != T)
    throw validation_error("one_at_a_time_training_error: missing dependence chain");
  if (!art.spectral)
    throw validation_error("one_at_a_time_training_error: missing spatial decomposition");

  TrainCov cov(art.spectral, art.weights_sym, train, {});
  Eigen::MatrixXd Xo(nt, art.data.ell());
  for (int i = 0; i < nt; ++i) Xo.row(i) = art.data.X.row(train[static_cast<size_t>(i)]);

  double prev_rho = -2.0, prev_kappa = -2.0;
  for (int t = 0; t < T; ++t) {
    const double rho = s.rho[t];
    const double kappa = art.kappa_at(s, t);
    if (rho != prev_rho || kappa != prev_kappa) {
      cov.rebuild(rho, kappa);
      prev_rho = rho;
      prev_kappa = kappa;
    }
    const Eigen::MatrixXd& Q = cov.Q();
    const Eigen::VectorXd m = Xo * s.beta.row(t).transpose();
    const Eigen::VectorXd r = s.z_train.row(t).transpose() - m;
    for (int i = 0; i < nt; ++i) {
      const double qii = Q(i, i);
      const double mu = m[i] - (Q.row(i).dot(r) - qii * r[i]) / qii;
      const double z = mu + std::sqrt(1.0 / qii) * rng.normal();
      if (z > 0.0) ++pos[static_cast<size_t>(i)];
    }
  }
  return classify_and_score(pos, T, art.data, train);
}

double joint_training_error(const PosteriorSamples& s, const FitArtifacts& art,
                            RngStream& rng) {
  const int T = s.draws();
  if (T < 1) throw validation_error("joint_training_error: empty chains");
  const std::vector<int>& train = art.train_idx;
  const int nt = static_cast<int>(train.size());
  if (nt < 1) throw validation_error("joint_training_error: no training sites");
  std::vector<int> pos(static_cast<size_t>(nt), 0);

  if (art.model == SpatialModel::probit || art.model == SpatialModel::lowrank) {
    Eigen::MatrixXd XH(nt, s.beta.cols());
    for (int i = 0; i < nt; ++i)
      XH.row(i) = art.design_row(train[static_cast<size_t>(i)]).transpose();
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd eta = XH * s.beta.row(t).transpose();
      for (int i = 0; i < nt; ++i)
        if (eta[i] + rng.normal() > 0.0) ++pos[static_cast<size_t>(i)];
    }
    return classify_and_score(pos, T, art.data, train);
  }

  if (s.rho.size() != T)
    throw validation_error("joint_training_error: missing dependence chain");
  if (!art.spectral)
    throw validation_error("joint_training_error: missing spatial decomposition");

  for (int t = 0; t < T; ++t) {
    const double rho = s.rho[t];
    const double kappa = art.kappa_at(s, t);
    // full-grid draw; the training restriction is its exact marginal
    const Eigen::VectorXd e = art.spectral->sample_sigma_star(rho, kappa, 1.0, rng);
    const Eigen::VectorXd beta_t = s.beta.row(t).transpose();
    for (int i = 0; i < nt; ++i) {
      const int site = train[static_cast<size_t>(i)];
      const double z = art.data.X.row(site).dot(beta_t) + e[site];
      if (z > 0.0) ++pos[static_cast<size_t>(i)];
    }
  }
  return classify_and_score(pos, T, art.data, train);
}

}  // namespace spclass
