#include "spclass/chains.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "spclass/errors.hpp"

namespace spclass {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json row_to_json(const Eigen::MatrixXd& m, int r) {
  json a = json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(r, j));
  return a;
}

Eigen::VectorXd json_to_vector(const json& a, const std::string& what) {
  if (!a.is_array()) throw validation_error("chains: field " + what + " must be an array");
  Eigen::VectorXd v(a.size());
  Eigen::Index i = 0;
  for (const auto& x : a) {
    if (!x.is_number()) throw validation_error("chains: non-numeric entry in " + what);
    v[i++] = x.get<double>();
  }
  return v;
}

}  // namespace

void write_meta_json(const std::string& path, const ChainMeta& m) {
  json j;
  j["format_version"] = 1;
  j["model"] = m.model;
  j["iters"] = m.iters;
  j["burn_in"] = m.burn_in;
  j["thin"] = m.thin;
  j["seed"] = m.seed;
  j["stream"] = m.stream;
  j["n"] = m.n;
  j["n_train"] = m.n_train;
  j["n_test"] = m.n_test;
  j["ell"] = m.ell;
  j["basis_rank"] = m.basis_rank;
  j["kappa_fixed"] = m.kappa_fixed;
  j["rho_acceptance"] = m.rho_acceptance;
  j["kappa_acceptance"] = m.kappa_acceptance;
  j["rho_proposal_sd"] = m.rho_proposal_sd;
  j["kappa_proposal_sd"] = m.kappa_proposal_sd;
  j["wall_time_sec"] = m.wall_time_sec;
  j["train_indices"] = m.train_indices;
  j["test_indices"] = m.test_indices;
  json gz = json::object();
  for (const auto& [k, v] : m.geweke_z) {
    if (std::isfinite(v))
      gz[k] = v;
    else
      gz[k] = nullptr;
  }
  j["geweke_z"] = gz;
  j["geweke_flags"] = m.geweke_flags;
  std::ofstream out(path);
  if (!out) throw numeric_error("cannot write meta file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw numeric_error("write failed: " + path);
}

ChainMeta read_meta_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open meta file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error("meta file " + path + ": invalid JSON: " + e.what());
  }
  ChainMeta m;
  try {
    m.model = j.at("model").get<std::string>();
    m.iters = j.at("iters").get<int>();
    m.burn_in = j.at("burn_in").get<int>();
    m.thin = j.at("thin").get<int>();
    m.seed = j.at("seed").get<unsigned long long>();
    m.stream = j.at("stream").get<unsigned long long>();
    m.n = j.at("n").get<int>();
    m.n_train = j.at("n_train").get<int>();
    m.n_test = j.at("n_test").get<int>();
    m.ell = j.at("ell").get<int>();
    m.basis_rank = j.value("basis_rank", 0);
    m.kappa_fixed = j.value("kappa_fixed", -1.0);
    m.rho_acceptance = j.value("rho_acceptance", -1.0);
    m.kappa_acceptance = j.value("kappa_acceptance", -1.0);
    m.rho_proposal_sd = j.value("rho_proposal_sd", 0.0);
    m.kappa_proposal_sd = j.value("kappa_proposal_sd", 0.0);
    m.wall_time_sec = j.value("wall_time_sec", 0.0);
    m.train_indices = j.at("train_indices").get<std::vector<int>>();
    m.test_indices = j.at("test_indices").get<std::vector<int>>();
    if (j.contains("geweke_z"))
      for (const auto& [k, v] : j.at("geweke_z").items())
        m.geweke_z[k] = v.is_null() ? std::nan("") : v.get<double>();
    if (j.contains("geweke_flags"))
      m.geweke_flags = j.at("geweke_flags").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw validation_error("meta file " + path + ": missing or mistyped field: " + e.what());
  }
  return m;
}

void write_chains_jsonl(const std::string& path, const PosteriorSamples& s) {
  std::ofstream out(path);
  if (!out) throw numeric_error("cannot write chains file: " + path);
  const bool has_rho = s.rho.size() > 0;
  const bool has_kappa = s.kappa.size() > 0;
  const bool has_train = s.z_train.cols() > 0 || s.meta.n_train == 0;
  for (int t = 0; t < s.draws(); ++t) {
    json j;
    j["beta"] = row_to_json(s.beta, t);
    if (has_rho) j["rho"] = s.rho[t];
    if (has_kappa) j["kappa"] = s.kappa[t];
    j["gamma2"] = s.gamma2[t];
    j["z_test"] = row_to_json(s.z_test, t);
    if (has_train && s.z_train.cols() > 0) j["z_train"] = row_to_json(s.z_train, t);
    out << j.dump() << '\n';
  }
  if (!out) throw numeric_error("write failed: " + path);
}

PosteriorSamples read_chains_jsonl(const std::string& chains_path, const ChainMeta& meta) {
  std::ifstream in(chains_path);
  if (!in) throw validation_error("cannot open chains file: " + chains_path);
  const bool expect_rho = meta.model == "sglm" || meta.model == "sglmm";
  const bool expect_kappa = meta.model == "sglmm" && meta.kappa_fixed < 0.0;
  std::vector<json> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw validation_error("chains file " + chains_path + " line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
    }
  }
  const int T = static_cast<int>(records.size());
  if (T == 0) throw validation_error("chains file " + chains_path + ": no draws");

  PosteriorSamples s;
  s.meta = meta;
  const int p = meta.ell + meta.basis_rank;
  s.beta.resize(T, p);
  s.gamma2.resize(T);
  if (expect_rho) s.rho.resize(T);
  if (expect_kappa) s.kappa.resize(T);
  s.z_test.resize(T, meta.n_test);
  const bool has_train = records[0].contains("z_train");
  s.z_train.resize(T, has_train ? meta.n_train : 0);

  for (int t = 0; t < T; ++t) {
    const json& j = records[static_cast<size_t>(t)];
    if (!j.contains("beta") || !j.contains("gamma2") || !j.contains("z_test"))
      throw validation_error("chains record " + std::to_string(t + 1) +
                             ": required fields beta, gamma2, z_test");
    const Eigen::VectorXd b = json_to_vector(j.at("beta"), "beta");
    if (b.size() != p)
      throw validation_error("chains record " + std::to_string(t + 1) + ": beta length " +
                             std::to_string(b.size()) + ", expected " + std::to_string(p));
    s.beta.row(t) = b.transpose();
    if (!j.at("gamma2").is_number())
      throw validation_error("chains record " + std::to_string(t + 1) + ": gamma2 not numeric");
    s.gamma2[t] = j.at("gamma2").get<double>();
    if (expect_rho) {
      if (!j.contains("rho"))
        throw validation_error("chains record " + std::to_string(t + 1) + ": missing rho");
      s.rho[t] = j.at("rho").get<double>();
    }
    if (expect_kappa) {
      if (!j.contains("kappa"))
        throw validation_error("chains record " + std::to_string(t + 1) + ": missing kappa");
      s.kappa[t] = j.at("kappa").get<double>();
    }
    const Eigen::VectorXd zt = json_to_vector(j.at("z_test"), "z_test");
    if (zt.size() != meta.n_test)
      throw validation_error("chains record " + std::to_string(t + 1) + ": z_test length " +
                             std::to_string(zt.size()) + ", expected " +
                             std::to_string(meta.n_test));
    s.z_test.row(t) = zt.transpose();
    if (has_train) {
      if (!j.contains("z_train"))
        throw validation_error("chains record " + std::to_string(t + 1) + ": missing z_train");
      const Eigen::VectorXd ztr = json_to_vector(j.at("z_train"), "z_train");
      if (ztr.size() != meta.n_train)
        throw validation_error("chains record " + std::to_string(t + 1) + ": z_train length " +
                               std::to_string(ztr.size()) + ", expected " +
                               std::to_string(meta.n_train));
      s.z_train.row(t) = ztr.transpose();
    }
  }
  return s;
}

}  // namespace spclass
