#include "spclass/probit_fit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "spclass/errors.hpp"
#include "spclass/moran.hpp"
#include "spclass/samplers.hpp"

namespace spclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double llt_log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(now() - t0).count();
}

}  // namespace

std::string model_name(SpatialModel m) {
  switch (m) {
    case SpatialModel::probit: return "probit";
    case SpatialModel::lowrank: return "lowrank";
    case SpatialModel::sglm: return "sglm";
    case SpatialModel::sglmm: return "sglmm";
  }
  throw validation_error("unknown model enum");
}

SpatialModel model_from_name(const std::string& name) {
  if (name == "probit") return SpatialModel::probit;
  if (name == "lowrank") return SpatialModel::lowrank;
  if (name == "sglm") return SpatialModel::sglm;
  if (name == "sglmm") return SpatialModel::sglmm;
  throw validation_error("unknown model name: " + name);
}

void McmcSettings::validate() const {
  if (iters < 1) throw validation_error("mcmc: iters must be positive");
  const int burn = effective_burn_in();
  if (burn < 0 || burn >= iters)
    throw validation_error("mcmc: burn-in must lie in [0, iters)");
  if (thin < 1) throw validation_error("mcmc: thin must be at least 1");
  if (!(rho_proposal_sd > 0.0) || !(kappa_proposal_sd > 0.0))
    throw validation_error("mcmc: proposal scales must be positive");
}

Eigen::VectorXd FitArtifacts::design_row(int i) const {
  const int ell = data.ell();
  const int r = static_cast<int>(psi.cols());
  Eigen::VectorXd x(ell + r);
  x.head(ell) = data.X.row(i).transpose();
  if (r > 0) x.tail(r) = psi.row(i).transpose();
  return x;
}

double FitArtifacts::kappa_at(const PosteriorSamples& s, int t) const {
  if (s.kappa.size() > 0) return s.kappa[t];
  if (kappa_fixed >= 0.0) return kappa_fixed;
  if (model == SpatialModel::sglm) return 1.0;
  return 0.0;
}

// ---------------------------------------------------------------------------
// TrainCov

TrainCov::TrainCov(std::shared_ptr<const CarSpectral> spectral,
                   const Eigen::MatrixXd& weights_sym, std::vector<int> train,
                   std::vector<int> test)
    : spec_(std::move(spectral)), train_(std::move(train)), test_(std::move(test)) {
  nt_ = static_cast<int>(train_.size());
  nu_ = static_cast<int>(test_.size());
  if (nt_ < 1) throw validation_error("TrainCov: no training sites");
  if (!spec_ || spec_->n() != static_cast<int>(weights_sym.rows()))
    throw validation_error("TrainCov: weights and spectral decomposition disagree");
  Ws_oo_.resize(nt_, nt_);
  for (int i = 0; i < nt_; ++i)
    for (int j = 0; j < nt_; ++j) Ws_oo_(i, j) = weights_sym(train_[i], train_[j]);
  Ws_uo_.resize(nu_, nt_);
  Ws_uu_.resize(nu_, nu_);
  for (int u = 0; u < nu_; ++u) {
    for (int j = 0; j < nt_; ++j) {
      const double w = weights_sym(test_[u], train_[j]);
      Ws_uo_(u, j) = w;
      if (w != 0.0) ou_nz_.push_back({static_cast<double>(j), static_cast<double>(u), w});
    }
    for (int v = 0; v < nu_; ++v) Ws_uu_(u, v) = weights_sym(test_[u], test_[v]);
  }
}

bool TrainCov::build_S(State& st, double rho) {
  if (rho >= 1.0 - 1e-12 || rho < 0.0) return false;
  double logdet_puu = 0.0;
  if (nu_ > 0) {
    Eigen::MatrixXd Puu = -rho * Ws_uu_;
    Puu.diagonal().array() += 1.0;
    st.F_uu.compute(Puu);
    if (st.F_uu.info() != Eigen::Success) return false;
    logdet_puu = llt_log_det(st.F_uu);
  }
  st.rho = rho;
  st.logdet_S = -(spec_->log_det(rho) + logdet_puu);
  st.s_materialized = false;
  return true;
}

void TrainCov::materialize_S(State& st) {
  st.S = -st.rho * Ws_oo_;
  st.S.diagonal().array() += 1.0;
  if (nu_ > 0) {
    st.G0 = st.F_uu.solve(Ws_uo_);
    const double r2 = st.rho * st.rho;
    for (const auto& nz : ou_nz_) {
      const int i = static_cast<int>(nz[0]);
      const int j = static_cast<int>(nz[1]);
      st.S.row(i).noalias() -= (r2 * nz[2]) * st.G0.row(j);
    }
  } else {
    st.G0.resize(0, nt_);
  }
  st.s_materialized = true;
}

TrainCov::Eval TrainCov::evaluate(double rho, double kappa, const Eigen::VectorXd& r) {
  Eval ev;
  pend_valid_ = false;
  pend_reuses_S_ = (rho == cur_.rho && cur_.s_materialized);
  State& st = pend_;
  if (!pend_reuses_S_) {
    if (!build_S(st, rho)) return ev;
  } else {
    st.rho = rho;
    st.logdet_S = cur_.logdet_S;
  }
  st.kappa = kappa;

  if (kappa == 1.0) {
    st.logdet_T = 0.0;
    if (pend_reuses_S_) {
      ev.quad = r.dot(cur_.S * r);
    } else if (st.s_materialized) {
      ev.quad = r.dot(st.S * r);
    } else {
      // r' S r without forming S: r' P_oo r - rho^2 (Ws_uo r)' P_uu^{-1} (Ws_uo r)
      double q = r.squaredNorm() - rho * r.dot(Ws_oo_ * r);
      if (nu_ > 0) {
        Eigen::VectorXd w = Ws_uo_ * r;
        q -= rho * rho * w.dot(st.F_uu.solve(w));
      }
      ev.quad = q;
    }
  } else {
    const Eigen::MatrixXd& S = pend_reuses_S_ ? cur_.S : (st.s_materialized ? st.S
                                                                            : (materialize_S(st), st.S));
    Eigen::MatrixXd T = (1.0 - kappa) * S;
    T.diagonal().array() += kappa;
    st.F_T.compute(T);
    if (st.F_T.info() != Eigen::Success) return ev;
    st.logdet_T = llt_log_det(st.F_T);
    const Eigen::VectorXd v = S * r;
    ev.quad = r.dot(st.F_T.solve(v));
  }
  st.logdet_sigma = st.logdet_T - st.logdet_S;
  ev.log_det = st.logdet_sigma;
  ev.ok = std::isfinite(ev.log_det) && std::isfinite(ev.quad);
  pend_valid_ = ev.ok;
  return ev;
}

void TrainCov::commit() {
  if (!pend_valid_) throw numeric_error("TrainCov: commit without a successful evaluate");
  if (pend_reuses_S_) {
    cur_.kappa = pend_.kappa;
    cur_.F_T = std::move(pend_.F_T);
    cur_.logdet_T = pend_.logdet_T;
    cur_.logdet_sigma = pend_.logdet_sigma;
  } else {
    if (!pend_.s_materialized) materialize_S(pend_);
    cur_ = std::move(pend_);
    pend_ = State{};
  }
  pend_valid_ = false;
  finalized_ = false;
}

void TrainCov::finalize() {
  if (cur_.rho < 0.0) throw numeric_error("TrainCov: finalize before any committed state");
  if (!cur_.s_materialized) materialize_S(cur_);
  const double rho = cur_.rho, kappa = cur_.kappa;
  if (kappa == 1.0) {
    Q_ = cur_.S;
    if (nu_ > 0) {
      B_ = rho * cur_.G0;
      s2_ = cur_.F_uu.solve(Eigen::MatrixXd::Identity(nu_, nu_)).diagonal();
    } else {
      B_.resize(0, nt_);
      s2_.resize(0);
    }
  } else {
    Q_ = cur_.F_T.solve(cur_.S);
    Q_ = 0.5 * (Q_ + Q_.transpose()).eval();
    if (nu_ > 0) {
      const Eigen::MatrixXd K_uo = spec_->dependence_block(rho, test_, train_);
      B_ = kappa * (K_uo * Q_);
      const Eigen::VectorXd kd = spec_->dependence_diag(rho, test_);
      s2_.resize(nu_);
      for (int u = 0; u < nu_; ++u)
        s2_[u] = (1.0 - kappa) + kappa * kd[u] - kappa * B_.row(u).dot(K_uo.row(u));
      s2_ = s2_.cwiseMax(0.0);
    } else {
      B_.resize(0, nt_);
      s2_.resize(0);
    }
  }
  finalized_ = true;
}

void TrainCov::rebuild(double rho, double kappa) {
  const Eval ev = evaluate(rho, kappa, Eigen::VectorXd::Zero(nt_));
  if (!ev.ok) throw numeric_error("TrainCov: covariance factorization failed at the requested state");
  commit();
  finalize();
}

double TrainCov::quad(const Eigen::VectorXd& r) const {
  if (!finalized_) throw numeric_error("TrainCov: quad before finalize");
  return r.dot(Q_ * r);
}

// ---------------------------------------------------------------------------
// Shared fit plumbing

namespace {

struct SplitInfo {
  std::vector<int> train, test;
  std::vector<int> y_train;  // 0/1 per training position
};

SplitInfo check_and_split(const Dataset& d, int design_cols) {
  SplitInfo sp;
  sp.train = d.train_indices();
  sp.test = d.test_indices();
  const int nt = static_cast<int>(sp.train.size());
  if (nt < 1) throw validation_error("fit: no training sites");
  int ones = 0;
  sp.y_train.reserve(sp.train.size());
  for (int i : sp.train) {
    const int yi = d.y[static_cast<size_t>(i)];
    if (yi < 0)
      throw validation_error("fit: training site (" +
                             std::to_string(d.coords[static_cast<size_t>(i)].row) + "," +
                             std::to_string(d.coords[static_cast<size_t>(i)].col) +
                             ") has no recorded response");
    sp.y_train.push_back(yi);
    ones += yi;
  }
  if (ones == 0)
    throw validation_error("fit: training response is all zero; the model is not identified");
  if (ones == nt)
    throw validation_error("fit: training response is all one; the model is not identified");
  if (design_cols >= nt)
    throw validation_error("fit: design has " + std::to_string(design_cols) +
                           " columns but only " + std::to_string(nt) + " training sites");
  return sp;
}

int retained_count(const McmcSettings& mc) {
  const int burn = mc.effective_burn_in();
  return (mc.iters - burn + mc.thin - 1) / mc.thin;
}

bool is_retained(int t, const McmcSettings& mc) {
  const int burn = mc.effective_burn_in();
  return t > burn && (t - burn - 1) % mc.thin == 0;
}

void fill_geweke(PosteriorSamples& s) {
  auto put = [&](const std::string& name, const Eigen::VectorXd& chain) {
    double z = std::nan("");
    if (chain.size() >= 100) {
      try {
        z = geweke_z(chain);
      } catch (const std::exception&) {
        z = std::nan("");
      }
      s.meta.geweke_z[name] = z;
      if (!std::isfinite(z) || std::abs(z) > 4.0) s.meta.geweke_flags.push_back(name);
    }
  };
  for (int j = 0; j < s.beta.cols(); ++j) put("beta" + std::to_string(j), s.beta.col(j));
  if (s.rho.size() > 0) put("rho", s.rho);
  if (s.kappa.size() > 0) put("kappa", s.kappa);
  put("gamma2", s.gamma2);
}

void adapt_scale(double& sd, long accepts, long attempts) {
  if (attempts < 1) return;
  const double rate = static_cast<double>(accepts) / static_cast<double>(attempts);
  if (rate > 0.5)
    sd *= 1.4;
  else if (rate < 0.3)
    sd /= 1.4;
  sd = std::clamp(sd, 1e-4, 2.0);
}

// Independent-error sampler over an augmented design; used directly for the
// plain probit fit (empty basis) and the reduced-rank fit.
FitResult fit_independent_impl(const Dataset& data, SpatialModel model, const PriorSpec& priors,
                               double r_frac, const McmcSettings& mc) {
  const auto t0 = now();
  data.validate();
  priors.validate();
  mc.validate();

  Dataset d = data;
  Eigen::MatrixXd psi(d.n(), 0);
  Eigen::MatrixXd Ws;
  if (model == SpatialModel::lowrank) {
    if (!(r_frac >= 0.0 && r_frac <= 1.0))
      throw validation_error("fit: basis fraction must lie in [0,1]");
    const NeighborhoodMatrix nb = build_grid_neighbors(d.coords, mc.neighbor_order);
    psi = moran_operator(d.X, nb.A, r_frac).vectors;
  }
  const int ell = d.ell();
  const int r = static_cast<int>(psi.cols());
  const int p = ell + r;
  const SplitInfo sp = check_and_split(d, p);
  const int nt = static_cast<int>(sp.train.size());
  const int nu = static_cast<int>(sp.test.size());

  Eigen::MatrixXd XHo(nt, p), XHu(nu, p);
  for (int i = 0; i < nt; ++i) {
    XHo.row(i).head(ell) = d.X.row(sp.train[static_cast<size_t>(i)]);
    if (r > 0) XHo.row(i).tail(r) = psi.row(sp.train[static_cast<size_t>(i)]);
  }
  for (int u = 0; u < nu; ++u) {
    XHu.row(u).head(ell) = d.X.row(sp.test[static_cast<size_t>(u)]);
    if (r > 0) XHu.row(u).tail(r) = psi.row(sp.test[static_cast<size_t>(u)]);
  }

  const Eigen::MatrixXd Vb = priors.beta_cov_for(ell);
  Eigen::MatrixXd VHinv = Eigen::MatrixXd::Zero(p, p);
  VHinv.topLeftCorner(ell, ell) =
      Vb.llt().solve(Eigen::MatrixXd::Identity(ell, ell));
  for (int j = ell; j < p; ++j) VHinv(j, j) = 1.0 / priors.basis_var;

  Eigen::MatrixXd M = XHo.transpose() * XHo + VHinv;
  Eigen::LLT<Eigen::MatrixXd> F_M(M);
  if (F_M.info() != Eigen::Success)
    throw numeric_error("fit: normal-equation matrix failed to factorize");

  RngStream rng(mc.seed, mc.stream);
  const int Tret = retained_count(mc);
  PosteriorSamples out;
  out.beta.resize(Tret, p);
  out.gamma2.resize(Tret);
  out.z_test.resize(Tret, nu);
  out.z_train.resize(Tret, mc.store_train_latents ? nt : 0);

  Eigen::VectorXd betaH = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd Zt(nt), zu(nu), xi(p);
  int row = 0;
  for (int t = 1; t <= mc.iters; ++t) {
    // Latent sweep with a freshly drawn working scale.
    const double g2t = scaled_inv_chisq_sample(priors.gamma_df, priors.gamma_scale, rng);
    const double gt = std::sqrt(g2t);
    const Eigen::VectorXd eta = XHo * betaH;
    for (int i = 0; i < nt; ++i) {
      const bool one = sp.y_train[static_cast<size_t>(i)] == 1;
      Zt[i] = truncated_normal_sample(gt * eta[i], g2t, one ? 0.0 : -kInf, one ? kInf : 0.0, rng);
    }
    if (nu > 0) {
      const Eigen::VectorXd eta_u = XHu * betaH;
      for (int u = 0; u < nu; ++u) zu[u] = eta_u[u] + rng.normal();
    }

    // Joint scale/coefficient update, then identification rescale.
    const Eigen::VectorXd bhat = F_M.solve(XHo.transpose() * Zt);
    const double rss = (Zt - XHo * bhat).squaredNorm();
    const double apost = static_cast<double>(nt) + priors.gamma_df;
    const double bpost = rss + priors.gamma_scale + bhat.dot(VHinv * bhat);
    const double g2 = scaled_inv_chisq_sample(apost, bpost, rng);
    const double g = std::sqrt(g2);
    for (int j = 0; j < p; ++j) xi[j] = rng.normal();
    const Eigen::VectorXd btilde = bhat + g * F_M.matrixU().solve(xi);
    betaH = btilde / g;

    if (is_retained(t, mc)) {
      out.beta.row(row) = betaH.transpose();
      out.gamma2[row] = g2;
      out.z_test.row(row) = zu.transpose();
      if (out.z_train.cols() > 0) out.z_train.row(row) = (Zt / gt).transpose();
      ++row;
    }
  }

  out.meta.model = model_name(model);
  out.meta.iters = mc.iters;
  out.meta.burn_in = mc.effective_burn_in();
  out.meta.thin = mc.thin;
  out.meta.seed = mc.seed;
  out.meta.stream = mc.stream;
  out.meta.n = d.n();
  out.meta.n_train = nt;
  out.meta.n_test = nu;
  out.meta.ell = ell;
  out.meta.basis_rank = r;
  out.meta.train_indices = sp.train;
  out.meta.test_indices = sp.test;
  fill_geweke(out);
  out.meta.wall_time_sec = seconds_since(t0);

  FitArtifacts art;
  art.model = model;
  art.data = std::move(d);
  art.train_idx = sp.train;
  art.test_idx = sp.test;
  art.psi = std::move(psi);
  art.priors = priors;
  art.settings = mc;
  return FitResult{std::move(out), std::move(art)};
}

// Spatial latent-covariance sampler (kappa clamped or free).
FitResult fit_spatial_impl(const Dataset& data, SpatialModel model, const PriorSpec& priors,
                           const McmcSettings& mc, std::optional<double> kappa_clamp) {
  const auto t0 = now();
  data.validate();
  priors.validate();
  mc.validate();
  if (kappa_clamp && !(*kappa_clamp >= 0.0 && *kappa_clamp <= 1.0))
    throw validation_error("fit: clamped kappa must lie in [0,1]");

  Dataset d = data;
  const int ell = d.ell();
  const SplitInfo sp = check_and_split(d, ell);
  const int nt = static_cast<int>(sp.train.size());
  const int nu = static_cast<int>(sp.test.size());

  const NeighborhoodMatrix nb = build_grid_neighbors(d.coords, mc.neighbor_order);
  auto spectral = std::make_shared<const CarSpectral>(nb);
  Eigen::MatrixXd Ws = symmetrized_weights(nb.A);
  TrainCov cov(spectral, Ws, sp.train, sp.test);

  const bool kappa_free = model == SpatialModel::sglmm && !kappa_clamp;
  const double kappa0 = model == SpatialModel::sglm ? 1.0 : (kappa_clamp ? *kappa_clamp : 0.5);
  const double rho0 = 0.5 * (priors.rho_lower + priors.rho_upper);
  cov.rebuild(rho0, kappa0);

  Eigen::MatrixXd Xo(nt, ell), Xu(nu, ell);
  for (int i = 0; i < nt; ++i) Xo.row(i) = d.X.row(sp.train[static_cast<size_t>(i)]);
  for (int u = 0; u < nu; ++u) Xu.row(u) = d.X.row(sp.test[static_cast<size_t>(u)]);

  const Eigen::MatrixXd Vb = priors.beta_cov_for(ell);
  const Eigen::MatrixXd Vbinv = Vb.llt().solve(Eigen::MatrixXd::Identity(ell, ell));

  Eigen::MatrixXd XtQ, M0;
  Eigen::LLT<Eigen::MatrixXd> F_M0;
  auto refresh_step2 = [&]() {
    XtQ = Xo.transpose() * cov.Q();
    M0 = XtQ * Xo + Vbinv;
    F_M0.compute(M0);
    if (F_M0.info() != Eigen::Success)
      throw numeric_error("fit: coefficient normal-equation matrix failed to factorize");
  };
  refresh_step2();

  RngStream rng(mc.seed, mc.stream);
  MetropolisState rho_st{rho0, mc.rho_proposal_sd, 0, 0};
  MetropolisState kap_st{kappa0, mc.kappa_proposal_sd, 0, 0};
  const int burn = mc.effective_burn_in();
  const int adapt_end = burn / 2;
  const bool adapting = mc.adapt_proposals && adapt_end >= 100;
  long rho_acc_win = 0, kap_acc_win = 0;
  long rho_acc_frozen = 0, rho_att_frozen = 0, kap_acc_frozen = 0, kap_att_frozen = 0;

  const int Tret = retained_count(mc);
  PosteriorSamples out;
  out.beta.resize(Tret, ell);
  out.rho.resize(Tret);
  if (kappa_free) out.kappa.resize(Tret);
  out.gamma2.resize(Tret);
  out.z_test.resize(Tret, nu);
  out.z_train.resize(Tret, mc.store_train_latents ? nt : 0);

  Eigen::VectorXd Zo(nt);
  for (int i = 0; i < nt; ++i) Zo[i] = sp.y_train[static_cast<size_t>(i)] == 1 ? 1.0 : -1.0;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(ell);
  Eigen::VectorXd Zt(nt), zu(nu), xi(ell);

  int row = 0;
  for (int t = 1; t <= mc.iters; ++t) {
    // --- latent sweep, working scale redrawn from its prior ---
    const double g2t = scaled_inv_chisq_sample(priors.gamma_df, priors.gamma_scale, rng);
    const double gt = std::sqrt(g2t);
    const Eigen::VectorXd m = Xo * beta;
    Eigen::VectorXd r = Zo - m;
    const Eigen::MatrixXd& Q = cov.Q();
    for (int i = 0; i < nt; ++i) {
      const double qii = Q(i, i);
      const double dot = Q.row(i).dot(r);
      const double mu = m[i] - (dot - qii * r[i]) / qii;
      const double var = 1.0 / qii;
      const bool one = sp.y_train[static_cast<size_t>(i)] == 1;
      Zt[i] = truncated_normal_sample(gt * mu, g2t * var, one ? 0.0 : -kInf, one ? kInf : 0.0,
                                      rng);
      const double zi = Zt[i] / gt;
      r[i] = zi - m[i];
    }
    Zo = m + r;
    // Held-out latents, conditioned on the training latents just drawn.
    if (nu > 0) {
      const Eigen::VectorXd mu_u = Xu * beta + cov.B() * r;
      const Eigen::VectorXd& s2 = cov.s2();
      for (int u = 0; u < nu; ++u) zu[u] = mu_u[u] + std::sqrt(s2[u]) * rng.normal();
    }

    // --- joint scale/coefficient update ---
    const Eigen::VectorXd bhat = F_M0.solve(XtQ * Zt);
    const Eigen::VectorXd resid = Zt - Xo * bhat;
    const double quad2 = cov.quad(resid);
    const double apost = static_cast<double>(nt) + priors.gamma_df;
    const double bpost = quad2 + priors.gamma_scale + bhat.dot(Vbinv * bhat);
    const double g2 = scaled_inv_chisq_sample(apost, bpost, rng);
    const double g = std::sqrt(g2);
    for (int j = 0; j < ell; ++j) xi[j] = rng.normal();
    const Eigen::VectorXd btilde = bhat + g * F_M0.matrixU().solve(xi);
    beta = btilde / g;

    // --- dependence parameter updates ---
    const Eigen::VectorXd rt = Zt - Xo * btilde;
    double cur_lt = -0.5 * (cov.log_det() + cov.quad(rt) / g2);
    bool dirty = false;
    {
      auto target = [&](double rp) {
        const TrainCov::Eval ev = cov.evaluate(rp, cov.kappa(), rt);
        if (!ev.ok) return -kInf;
        return -0.5 * (ev.log_det + ev.quad / g2);
      };
      if (rw_metropolis_step(rho_st, target, cur_lt, priors.rho_lower, priors.rho_upper, rng)) {
        cov.commit();
        dirty = true;
        ++rho_acc_win;
      }
    }
    if (kappa_free) {
      auto target = [&](double kp) {
        const TrainCov::Eval ev = cov.evaluate(cov.rho(), kp, rt);
        if (!ev.ok) return -kInf;
        return -0.5 * (ev.log_det + ev.quad / g2);
      };
      if (rw_metropolis_step(kap_st, target, cur_lt, 0.0, 1.0, rng)) {
        cov.commit();
        dirty = true;
        ++kap_acc_win;
      }
    }
    if (dirty) {
      cov.finalize();
      refresh_step2();
    }

    // --- proposal adaptation, frozen after the first half of burn-in ---
    if (adapting && t <= adapt_end && t % 100 == 0) {
      adapt_scale(rho_st.proposal_sd, rho_acc_win, 100);
      if (kappa_free) adapt_scale(kap_st.proposal_sd, kap_acc_win, 100);
      rho_acc_win = kap_acc_win = 0;
    }
    if (t == adapt_end) {
      rho_acc_frozen = rho_st.accepts;
      rho_att_frozen = rho_st.attempts;
      kap_acc_frozen = kap_st.accepts;
      kap_att_frozen = kap_st.attempts;
    }

    if (is_retained(t, mc)) {
      out.beta.row(row) = beta.transpose();
      out.rho[row] = rho_st.current;
      if (kappa_free) out.kappa[row] = kap_st.current;
      out.gamma2[row] = g2;
      out.z_test.row(row) = zu.transpose();
      if (out.z_train.cols() > 0) out.z_train.row(row) = Zo.transpose();
      ++row;
    }
  }

  out.meta.model = model_name(model);
  out.meta.iters = mc.iters;
  out.meta.burn_in = burn;
  out.meta.thin = mc.thin;
  out.meta.seed = mc.seed;
  out.meta.stream = mc.stream;
  out.meta.n = d.n();
  out.meta.n_train = nt;
  out.meta.n_test = nu;
  out.meta.ell = ell;
  out.meta.kappa_fixed = model == SpatialModel::sglm ? 1.0 : (kappa_clamp ? *kappa_clamp : -1.0);
  const long ra = rho_st.attempts - rho_att_frozen;
  out.meta.rho_acceptance =
      ra > 0 ? static_cast<double>(rho_st.accepts - rho_acc_frozen) / static_cast<double>(ra)
             : -1.0;
  if (kappa_free) {
    const long ka = kap_st.attempts - kap_att_frozen;
    out.meta.kappa_acceptance =
        ka > 0 ? static_cast<double>(kap_st.accepts - kap_acc_frozen) / static_cast<double>(ka)
               : -1.0;
  }
  out.meta.rho_proposal_sd = rho_st.proposal_sd;
  out.meta.kappa_proposal_sd = kap_st.proposal_sd;
  out.meta.train_indices = sp.train;
  out.meta.test_indices = sp.test;
  fill_geweke(out);
  out.meta.wall_time_sec = seconds_since(t0);

  FitArtifacts art;
  art.model = model;
  art.data = std::move(d);
  art.train_idx = sp.train;
  art.test_idx = sp.test;
  art.spectral = spectral;
  art.weights_sym = std::move(Ws);
  art.psi.resize(art.data.n(), 0);
  art.priors = priors;
  art.settings = mc;
  art.kappa_fixed = out.meta.kappa_fixed;
  return FitResult{std::move(out), std::move(art)};
}

}  // namespace

FitResult fit_indep_probit(const Dataset& data, const PriorSpec& priors,
                           const McmcSettings& mcmc) {
  return fit_independent_impl(data, SpatialModel::probit, priors, 0.0, mcmc);
}

FitResult fit_lowrank(const Dataset& data, const PriorSpec& priors, double r_frac,
                      const McmcSettings& mcmc) {
  return fit_independent_impl(data, SpatialModel::lowrank, priors, r_frac, mcmc);
}

FitResult fit_sglm(const Dataset& data, const PriorSpec& priors, const McmcSettings& mcmc) {
  return fit_spatial_impl(data, SpatialModel::sglm, priors, mcmc, 1.0);
}

FitResult fit_sglmm(const Dataset& data, const PriorSpec& priors, const McmcSettings& mcmc) {
  return fit_spatial_impl(data, SpatialModel::sglmm, priors, mcmc, std::nullopt);
}

FitResult fit_sglmm_fixed_kappa(const Dataset& data, const PriorSpec& priors, double kappa,
                                const McmcSettings& mcmc) {
  return fit_spatial_impl(data, SpatialModel::sglmm, priors, mcmc, kappa);
}

Eigen::VectorXd predict_latent(const PosteriorSamples& s, const FitArtifacts& art,
                               int focal_index, RngStream& rng) {
  if (focal_index < 0 || focal_index >= art.data.n())
    throw validation_error("predict_latent: focal index out of range");
  const int T = s.draws();
  if (T < 1) throw validation_error("predict_latent: empty chains");
  Eigen::VectorXd out(T);

  if (art.model == SpatialModel::probit || art.model == SpatialModel::lowrank) {
    const Eigen::VectorXd xh = art.design_row(focal_index);
    if (xh.size() != s.beta.cols())
      throw validation_error("predict_latent: design and chain dimensions disagree");
    for (int t = 0; t < T; ++t) out[t] = s.beta.row(t).dot(xh) + rng.normal();
    return out;
  }

  if (!art.spectral) throw validation_error("predict_latent: missing spatial decomposition");
  const std::vector<int>& train = art.train_idx;
  const int nt = static_cast<int>(train.size());
  if (s.z_train.cols() != nt)
    throw validation_error("predict_latent: training latent draws were not stored");
  if (s.rho.size() != T) throw validation_error("predict_latent: missing dependence chain");

  const int ell = art.data.ell();
  Eigen::MatrixXd Xo(nt, ell);
  for (int i = 0; i < nt; ++i) Xo.row(i) = art.data.X.row(train[static_cast<size_t>(i)]);
  const Eigen::VectorXd xf = art.data.X.row(focal_index).transpose();
  int focal_pos = -1;
  for (int i = 0; i < nt; ++i)
    if (train[static_cast<size_t>(i)] == focal_index) focal_pos = i;

  const std::vector<int> focal_vec{focal_index};
  double prev_rho = std::nan(""), prev_kappa = std::nan("");
  Eigen::VectorXd w(nt);
  double cond_var = 0.0;
  for (int t = 0; t < T; ++t) {
    const double rho = s.rho[t];
    const double kappa = art.kappa_at(s, t);
    if (rho != prev_rho || kappa != prev_kappa) {
      Eigen::MatrixXd Sigma_oo = kappa * art.spectral->dependence_block(rho, train, train);
      Sigma_oo.diagonal().array() += 1.0 - kappa;
      Eigen::LLT<Eigen::MatrixXd> F(Sigma_oo);
      if (F.info() != Eigen::Success)
        throw numeric_error("predict_latent: training covariance failed to factorize");
      Eigen::VectorXd sigma_f =
          kappa * art.spectral->dependence_block(rho, focal_vec, train).row(0).transpose();
      if (focal_pos >= 0) sigma_f[focal_pos] += 1.0 - kappa;
      const double sigma_ff =
          (1.0 - kappa) + kappa * art.spectral->dependence_diag(rho, focal_vec)[0];
      w = F.solve(sigma_f);
      cond_var = std::max(0.0, sigma_ff - sigma_f.dot(w));
      prev_rho = rho;
      prev_kappa = kappa;
    }
    const Eigen::VectorXd beta_t = s.beta.row(t).transpose();
    const double mean =
        xf.dot(beta_t) + w.dot(s.z_train.row(t).transpose() - Xo * beta_t);
    out[t] = mean + std::sqrt(cond_var) * rng.normal();
  }
  return out;
}

}  // namespace spclass
