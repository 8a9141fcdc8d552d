#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "spclass/covariance.hpp"
#include "spclass/errors.hpp"
#include "spclass/grid.hpp"
#include "spclass/probit_fit.hpp"

using namespace spclass;

namespace {

Dataset grid_dataset(int rows, int cols, const std::vector<int>& y,
                     const std::vector<int>& test_sites,
                     const Eigen::MatrixXd& covariates = Eigen::MatrixXd()) {
  const int n = rows * cols;
  Dataset d;
  d.X.resize(n, 1 + covariates.cols());
  d.X.col(0).setOnes();
  if (covariates.cols() > 0) d.X.rightCols(covariates.cols()) = covariates;
  d.y = y;
  d.coords.resize(n);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) d.coords[static_cast<size_t>(r * cols + c)] = {r, c};
  d.test_mask.assign(n, 0);
  for (int i : test_sites) d.test_mask[static_cast<size_t>(i)] = 1;
  return d;
}

// Deterministic half/half labels.
std::vector<int> alternating_labels(int n) {
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) y[static_cast<size_t>(i)] = i % 2;
  return y;
}

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Posterior mean of the intercept in an intercept-only probit model with a
// N(0, v) prior, k successes out of m, by Simpson quadrature.
double probit_intercept_posterior_mean(int k, int m, double v) {
  const int N = 40000;
  const double lo = -12.0, hi = 12.0;
  const double h = (hi - lo) / N;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double b = lo + h * i;
    const double w = (i == 0 || i == N) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double p = phi_cdf(b);
    const double like = std::pow(p, k) * std::pow(1.0 - p, m - k);
    const double prior = std::exp(-0.5 * b * b / v);
    num += w * like * prior * b;
    den += w * like * prior;
  }
  return num / den;
}

// Conditional moments of one coordinate given a subset, by explicit inverse.
std::pair<double, double> dense_conditional(const Eigen::MatrixXd& Sigma,
                                            const Eigen::VectorXd& mean, int focal,
                                            const std::vector<int>& obs,
                                            const Eigen::VectorXd& zobs) {
  const int m = static_cast<int>(obs.size());
  Eigen::MatrixXd Soo(m, m);
  Eigen::VectorXd sf(m), mo(m);
  for (int i = 0; i < m; ++i) {
    sf[i] = Sigma(focal, obs[static_cast<size_t>(i)]);
    mo[i] = mean[obs[static_cast<size_t>(i)]];
    for (int j = 0; j < m; ++j) Soo(i, j) = Sigma(obs[static_cast<size_t>(i)], obs[static_cast<size_t>(j)]);
  }
  Eigen::MatrixXd Sooinv = Soo.inverse();
  const double mu = mean[focal] + sf.dot(Sooinv * (zobs - mo));
  const double var = Sigma(focal, focal) - sf.dot(Sooinv * sf);
  return {mu, var};
}

bool chains_identical(const PosteriorSamples& a, const PosteriorSamples& b) {
  return a.beta == b.beta && a.rho == b.rho && a.kappa == b.kappa && a.gamma2 == b.gamma2 &&
         a.z_test == b.z_test && a.z_train == b.z_train;
}

}  // namespace

TEST_CASE("train-block covariance machinery matches a dense oracle") {
  // 4x4 grid, 10 train / 6 test sites
  const int n = 16;
  std::vector<int> test_sites = {2, 5, 7, 8, 12, 15};
  Dataset d = grid_dataset(4, 4, std::vector<int>(n, 0), test_sites);
  const NeighborhoodMatrix nb = build_grid_neighbors(d.coords, NeighborOrder::second);
  auto spectral = std::make_shared<const CarSpectral>(nb);
  const Eigen::MatrixXd Ws = symmetrized_weights(nb.A);
  const std::vector<int> train = d.train_indices();
  const std::vector<int> test = d.test_indices();
  const int nt = static_cast<int>(train.size());
  const int nu = static_cast<int>(test.size());
  REQUIRE(nt == 10);

  TrainCov cov(spectral, Ws, train, test);
  std::mt19937_64 gen(42);
  std::normal_distribution<double> nd;
  Eigen::VectorXd r(nt);
  for (int i = 0; i < nt; ++i) r[i] = nd(gen);

  auto check_state = [&](double rho, double kappa) {
    // dense oracle over the full grid
    const Eigen::MatrixXd K = spectral->dependence(rho);
    const Eigen::MatrixXd Sig = assemble_sigma_star(K, kappa, 1.0);
    Eigen::MatrixXd Soo(nt, nt), Suo(nu, nt), Suu(nu, nu);
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < nt; ++j) Soo(i, j) = Sig(train[static_cast<size_t>(i)], train[static_cast<size_t>(j)]);
    for (int u = 0; u < nu; ++u) {
      for (int j = 0; j < nt; ++j) Suo(u, j) = Sig(test[static_cast<size_t>(u)], train[static_cast<size_t>(j)]);
      for (int v = 0; v < nu; ++v) Suu(u, v) = Sig(test[static_cast<size_t>(u)], test[static_cast<size_t>(v)]);
    }
    const Eigen::MatrixXd Qo = Soo.inverse();
    const double logdet_o = std::log(Soo.determinant());
    const double quad_o = r.dot(Qo * r);

    TrainCov::Eval ev = cov.evaluate(rho, kappa, r);
    REQUIRE(ev.ok);
    CHECK(ev.log_det == doctest::Approx(logdet_o).epsilon(1e-8));
    CHECK(ev.quad == doctest::Approx(quad_o).epsilon(1e-8));
    cov.commit();
    cov.finalize();
    CHECK(cov.rho() == rho);
    CHECK(cov.kappa() == kappa);
    CHECK(cov.log_det() == doctest::Approx(logdet_o).epsilon(1e-8));
    CHECK(cov.quad(r) == doctest::Approx(quad_o).epsilon(1e-8));
    CHECK((cov.Q() - Qo).cwiseAbs().maxCoeff() < 1e-8);

    const Eigen::MatrixXd Bo = Suo * Qo;
    CHECK((cov.B() - Bo).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::MatrixXd condvar = Suu - Suo * Qo * Suo.transpose();
    for (int u = 0; u < nu; ++u) CHECK(cov.s2()[u] == doctest::Approx(condvar(u, u)).epsilon(1e-8));
  };

  check_state(0.3, 1.0);   // cold build, purely spatial
  check_state(0.7, 0.4);   // new rho, mixed
  check_state(0.7, 0.9);   // same rho: exercises the S-reuse path
  check_state(0.99, 0.25); // near-unit dependence
  check_state(0.99, 1.0);  // same rho, back to the kappa=1 fast path
  check_state(0.5, 0.0);   // independent special case
  // independent case: unit conditional variances and no cross-weights
  CHECK(cov.B().cwiseAbs().maxCoeff() < 1e-12);
  for (int u = 0; u < nu; ++u) CHECK(cov.s2()[u] == doctest::Approx(1.0));

  // inadmissible dependence values are refused rather than mis-priced
  CHECK_FALSE(cov.evaluate(1.0, 1.0, r).ok);
  CHECK_FALSE(cov.evaluate(1.0 - 1e-14, 0.5, r).ok);
  CHECK_FALSE(cov.evaluate(-0.1, 0.5, r).ok);
  CHECK_THROWS_AS(cov.commit(), numeric_error);

  // all-train split (no held-out block)
  Dataset d2 = grid_dataset(3, 3, std::vector<int>(9, 0), {});
  const NeighborhoodMatrix nb2 = build_grid_neighbors(d2.coords, NeighborOrder::second);
  auto spectral2 = std::make_shared<const CarSpectral>(nb2);
  TrainCov cov2(spectral2, symmetrized_weights(nb2.A), d2.train_indices(), {});
  Eigen::VectorXd r2 = Eigen::VectorXd::LinSpaced(9, -1.0, 1.0);
  const Eigen::MatrixXd Sig2 = assemble_sigma_star(spectral2->dependence(0.85), 0.6, 1.0);
  TrainCov::Eval ev2 = cov2.evaluate(0.85, 0.6, r2);
  REQUIRE(ev2.ok);
  CHECK(ev2.log_det == doctest::Approx(std::log(Sig2.determinant())).epsilon(1e-8));
  CHECK(ev2.quad == doctest::Approx(r2.dot(Sig2.inverse() * r2)).epsilon(1e-8));
  cov2.commit();
  cov2.finalize();
  CHECK(cov2.n_test() == 0);
  CHECK((cov2.Q() - Sig2.inverse()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fitters reject unusable inputs") {
  Dataset d = grid_dataset(3, 3, std::vector<int>(9, 1), {8});
  McmcSettings mc;
  mc.iters = 10;
  mc.burn_in = 2;
  PriorSpec pr;
  // all-one training response
  CHECK_THROWS_AS(fit_indep_probit(d, pr, mc), validation_error);
  CHECK_THROWS_AS(fit_sglm(d, pr, mc), validation_error);
  // all-zero training response
  Dataset d0 = grid_dataset(3, 3, std::vector<int>(9, 0), {8});
  CHECK_THROWS_AS(fit_sglmm(d0, pr, mc), validation_error);
  // unrecorded response on a non-test site
  Dataset dm = grid_dataset(3, 3, alternating_labels(9), {8});
  dm.y[3] = -1;
  CHECK_THROWS_AS(fit_indep_probit(dm, pr, mc), validation_error);
  // more design columns than training sites
  Dataset dwide = grid_dataset(2, 2, alternating_labels(4), {},
                               Eigen::MatrixXd::Random(4, 5));
  CHECK_THROWS_AS(fit_indep_probit(dwide, pr, mc), validation_error);
  // clamped kappa outside [0,1]
  Dataset dok = grid_dataset(3, 3, alternating_labels(9), {});
  CHECK_THROWS_AS(fit_sglmm_fixed_kappa(dok, pr, 1.5, mc), validation_error);
  CHECK_THROWS_AS(fit_sglmm_fixed_kappa(dok, pr, -0.1, mc), validation_error);
  // malformed sampler settings
  McmcSettings bad = mc;
  bad.burn_in = 10;
  CHECK_THROWS_AS(fit_indep_probit(dok, pr, bad), validation_error);
  bad = mc;
  bad.thin = 0;
  CHECK_THROWS_AS(fit_indep_probit(dok, pr, bad), validation_error);
}

TEST_CASE("independent probit fit is deterministic and equals its zero-basis twin") {
  Dataset d = grid_dataset(6, 6, alternating_labels(36), {1, 7, 22, 30});
  McmcSettings mc;
  mc.iters = 400;
  mc.burn_in = 200;
  mc.seed = 11;
  PriorSpec pr;

  FitResult a = fit_indep_probit(d, pr, mc);
  FitResult b = fit_indep_probit(d, pr, mc);
  CHECK(chains_identical(a.samples, b.samples));
  CHECK(a.samples.draws() == 200);
  CHECK(a.samples.meta.model == "probit");
  CHECK(a.samples.meta.basis_rank == 0);
  CHECK(a.samples.rho.size() == 0);
  CHECK(a.samples.kappa.size() == 0);
  CHECK(a.samples.z_test.cols() == 4);
  CHECK(a.samples.z_train.cols() == 32);

  // an empty spatial basis must reproduce the plain probit chains bit for bit
  FitResult c = fit_lowrank(d, pr, 0.0, mc);
  CHECK(chains_identical(a.samples, c.samples));
  CHECK(c.samples.meta.model == "lowrank");
  CHECK(c.samples.meta.basis_rank == 0);

  // a different stream must decouple the chains
  McmcSettings mc2 = mc;
  mc2.stream = 1;
  FitResult e = fit_indep_probit(d, pr, mc2);
  CHECK_FALSE(chains_identical(a.samples, e.samples));

  // a non-trivial basis changes the design dimension
  FitResult f = fit_lowrank(d, pr, 0.2, mc);
  CHECK(f.samples.meta.basis_rank == 8);  // ceil(0.2 * 36)
  CHECK(f.samples.beta.cols() == 1 + 8);
  CHECK(f.artifacts.psi.cols() == 8);
}

TEST_CASE("intercept-only probit posterior matches numerical quadrature") {
  // 4 successes, 2 failures, N(0,10) prior on the intercept
  Dataset d = grid_dataset(2, 3, {1, 1, 1, 1, 0, 0}, {});
  PriorSpec pr;
  pr.beta_var = 10.0;
  McmcSettings mc;
  mc.iters = 30000;
  mc.burn_in = 5000;
  mc.seed = 5;

  const double oracle_mean = probit_intercept_posterior_mean(4, 6, 10.0);
  FitResult fit = fit_indep_probit(d, pr, mc);
  const double mc_mean = fit.samples.beta.col(0).mean();
  CHECK(mc_mean == doctest::Approx(oracle_mean).epsilon(0.08));

  // the latent-covariance sampler clamped at kappa = 0 targets the same
  // posterior through an entirely different code path
  FitResult fit0 = fit_sglmm_fixed_kappa(d, pr, 0.0, mc);
  const double mc_mean0 = fit0.samples.beta.col(0).mean();
  CHECK(mc_mean0 == doctest::Approx(oracle_mean).epsilon(0.08));
  // its held-out machinery is inert but its dependence chain stays in bounds
  for (int t = 0; t < fit0.samples.draws(); ++t) {
    CHECK(fit0.samples.rho[t] > 0.0);
    CHECK(fit0.samples.rho[t] < 1.0);
  }
}

TEST_CASE("separation drives the coefficient until the prior stops it") {
  const int n = 64;
  std::vector<int> y = alternating_labels(n);
  Eigen::MatrixXd cov(n, 1);
  for (int i = 0; i < n; ++i) cov(i, 0) = y[static_cast<size_t>(i)] == 1 ? 1.0 : -1.0;
  Dataset d = grid_dataset(8, 8, y, {}, cov);
  McmcSettings mc;
  mc.iters = 3000;
  mc.burn_in = 1000;
  mc.seed = 3;
  PriorSpec pr;

  FitResult fit = fit_indep_probit(d, pr, mc);
  CHECK(fit.samples.beta.col(1).mean() > 1.5);

  // a near-degenerate prior pins the same coefficient at zero
  PriorSpec tight = pr;
  tight.beta_cov = 1e-6 * Eigen::MatrixXd::Identity(2, 2);
  FitResult pinned = fit_indep_probit(d, tight, mc);
  CHECK(std::abs(pinned.samples.beta.col(1).mean()) < 0.05);
}

TEST_CASE("balanced labels keep the intercept near zero") {
  const int n = 400;
  Dataset d = grid_dataset(20, 20, alternating_labels(n), {});
  McmcSettings mc;
  mc.iters = 4000;
  mc.burn_in = 1000;
  mc.seed = 9;
  FitResult fit = fit_indep_probit(d, PriorSpec{}, mc);
  CHECK(std::abs(fit.samples.beta.col(0).mean()) < 0.1);
}

TEST_CASE("purely spatial fit: support, sign coherence, and clamped-kappa equivalence") {
  std::vector<int> y(36);
  for (int i = 0; i < 36; ++i) y[static_cast<size_t>(i)] = (i / 6 < 3) ? 1 : 0;  // top half one
  std::vector<int> test_sites = {3, 10, 17, 24, 31, 35};
  Dataset d = grid_dataset(6, 6, y, test_sites);
  McmcSettings mc;
  mc.iters = 1200;
  mc.burn_in = 600;
  mc.seed = 21;
  PriorSpec pr;

  FitResult a = fit_sglm(d, pr, mc);
  CHECK(a.samples.meta.model == "sglm");
  CHECK(a.samples.meta.kappa_fixed == 1.0);
  CHECK(a.samples.kappa.size() == 0);
  CHECK(a.samples.draws() == 600);
  REQUIRE(a.samples.z_train.cols() == 30);
  const std::vector<int> train = d.train_indices();
  for (int t = 0; t < a.samples.draws(); ++t) {
    CHECK(a.samples.rho[t] > 0.0);
    CHECK(a.samples.rho[t] < 1.0);
    for (int i = 0; i < 30; ++i) {
      const double z = a.samples.z_train(t, i);
      if (d.y[static_cast<size_t>(train[static_cast<size_t>(i)])] == 1)
        CHECK(z > 0.0);
      else
        CHECK(z <= 0.0);
    }
    for (int u = 0; u < 6; ++u) CHECK(std::isfinite(a.samples.z_test(t, u)));
  }

  // clamping the mixed model at kappa = 1 must reproduce the purely spatial
  // chains exactly
  FitResult b = fit_sglmm_fixed_kappa(d, pr, 1.0, mc);
  CHECK(chains_identical(a.samples, b.samples));
  CHECK(b.samples.meta.model == "sglmm");
  CHECK(b.samples.meta.kappa_fixed == 1.0);

  // determinism of the spatial path
  FitResult c = fit_sglm(d, pr, mc);
  CHECK(chains_identical(a.samples, c.samples));
}

TEST_CASE("free-kappa fit explores both dependence parameters inside their support") {
  std::vector<int> y(25);
  for (int i = 0; i < 25; ++i) y[static_cast<size_t>(i)] = (i % 5 < 2) ? 1 : 0;
  Dataset d = grid_dataset(5, 5, y, {12});
  McmcSettings mc;
  mc.iters = 1500;
  mc.burn_in = 500;
  mc.seed = 33;
  FitResult fit = fit_sglmm(d, PriorSpec{}, mc);
  CHECK(fit.samples.meta.model == "sglmm");
  CHECK(fit.samples.meta.kappa_fixed == -1.0);
  REQUIRE(fit.samples.kappa.size() == 1000);
  double kmin = 1.0, kmax = 0.0;
  for (int t = 0; t < 1000; ++t) {
    CHECK(fit.samples.rho[t] > 0.0);
    CHECK(fit.samples.rho[t] < 1.0);
    CHECK(fit.samples.kappa[t] > 0.0);
    CHECK(fit.samples.kappa[t] < 1.0);
    kmin = std::min(kmin, fit.samples.kappa[t]);
    kmax = std::max(kmax, fit.samples.kappa[t]);
  }
  CHECK(kmax - kmin > 0.05);  // the chain actually moves
  // diagnostics cover every scalar chain once enough draws are retained
  CHECK(fit.samples.meta.geweke_z.count("beta0") == 1);
  CHECK(fit.samples.meta.geweke_z.count("rho") == 1);
  CHECK(fit.samples.meta.geweke_z.count("kappa") == 1);
  CHECK(fit.samples.meta.geweke_z.count("gamma2") == 1);
  CHECK(fit.samples.meta.rho_acceptance >= 0.0);
  CHECK(fit.samples.meta.rho_acceptance <= 1.0);
  CHECK(fit.samples.meta.kappa_acceptance >= 0.0);
  CHECK(fit.samples.meta.kappa_acceptance <= 1.0);

  FitResult again = fit_sglmm(d, PriorSpec{}, mc);
  CHECK(chains_identical(fit.samples, again.samples));
}

TEST_CASE("retention and thinning arithmetic") {
  Dataset d = grid_dataset(3, 3, alternating_labels(9), {});
  McmcSettings mc;
  mc.iters = 10;
  mc.burn_in = 4;
  mc.thin = 3;
  FitResult fit = fit_indep_probit(d, PriorSpec{}, mc);
  CHECK(fit.samples.draws() == 2);  // iterations 5 and 8
  CHECK(fit.samples.meta.iters == 10);
  CHECK(fit.samples.meta.burn_in == 4);
  CHECK(fit.samples.meta.thin == 3);
  CHECK(fit.samples.meta.geweke_z.empty());  // too few draws for diagnostics

  // default burn-in is half the iterations
  McmcSettings md;
  md.iters = 50;
  CHECK(md.effective_burn_in() == 25);
}

TEST_CASE("latent prediction matches analytic conditionals") {
  // (a) independent-error model: draws are N(x'beta, 1)
  {
    const int T = 4000;
    FitArtifacts art;
    art.model = SpatialModel::probit;
    art.data = grid_dataset(1, 2, {1, 0}, {1});
    art.psi.resize(2, 0);
    PosteriorSamples s;
    s.beta = Eigen::MatrixXd::Constant(T, 1, 0.3);
    s.gamma2 = Eigen::VectorXd::Ones(T);
    s.meta.model = "probit";
    RngStream rng(4, 0);
    Eigen::VectorXd draws = predict_latent(s, art, 1, rng);
    const double mean = draws.mean();
    const double sd = std::sqrt((draws.array() - mean).square().sum() / (T - 1));
    CHECK(std::abs(mean - 0.3) < 4.0 / std::sqrt(T));
    CHECK(sd > 0.93);
    CHECK(sd < 1.07);
  }

  // (b) spatial models: draws follow the conditional of the focal site given
  // the stored training latents, checked against an explicit-inverse oracle
  auto spatial_case = [&](double kappa, int focal, bool expect_exact) {
    const int T = 4000;
    Dataset d = grid_dataset(2, 2, {1, 0, 1, 0}, {3});
    const NeighborhoodMatrix nb = build_grid_neighbors(d.coords, NeighborOrder::second);
    auto spectral = std::make_shared<const CarSpectral>(nb);

    FitArtifacts art;
    art.model = kappa == 1.0 ? SpatialModel::sglm : SpatialModel::sglmm;
    art.data = d;
    art.train_idx = {0, 1, 2};
    art.test_idx = {3};
    art.spectral = spectral;
    art.psi.resize(4, 0);
    art.kappa_fixed = kappa;

    const double rho = 0.6, beta = 0.2;
    Eigen::Vector3d ztr(0.5, -0.3, 0.8);
    PosteriorSamples s;
    s.beta = Eigen::MatrixXd::Constant(T, 1, beta);
    s.rho = Eigen::VectorXd::Constant(T, rho);
    s.gamma2 = Eigen::VectorXd::Ones(T);
    s.z_train = ztr.transpose().replicate(T, 1);
    s.meta.model = model_name(art.model);
    s.meta.kappa_fixed = kappa;

    const Eigen::MatrixXd Sigma = assemble_sigma_star(spectral->dependence(rho), kappa, 1.0);
    const Eigen::VectorXd mean_all = Eigen::VectorXd::Constant(4, beta);  // intercept-only
    auto [mu_o, var_o] = dense_conditional(Sigma, mean_all, focal, {0, 1, 2}, ztr);

    RngStream rng(8, 0);
    Eigen::VectorXd draws = predict_latent(s, art, focal, rng);
    if (expect_exact) {
      // focal is a training site under kappa = 1: its latent is reproduced
      for (int t = 0; t < T; ++t) CHECK(draws[t] == doctest::Approx(ztr[focal]).epsilon(1e-9));
    } else {
      const double mean = draws.mean();
      const double sd = std::sqrt((draws.array() - mean).square().sum() / (T - 1));
      CHECK(std::abs(mean - mu_o) < 5.0 * std::sqrt(var_o / T) + 1e-12);
      CHECK(sd == doctest::Approx(std::sqrt(var_o)).epsilon(0.08));
    }
  };
  spatial_case(1.0, 3, false);   // purely spatial, held-out focal
  spatial_case(0.4, 3, false);   // mixed covariance, held-out focal
  spatial_case(1.0, 1, true);    // training focal reproduces its own latent
}

TEST_CASE("latent prediction refuses inconsistent inputs") {
  FitArtifacts art;
  art.model = SpatialModel::sglm;
  art.data = grid_dataset(2, 2, {1, 0, 1, 0}, {3});
  art.train_idx = {0, 1, 2};
  art.test_idx = {3};
  const NeighborhoodMatrix nb = build_grid_neighbors(art.data.coords, NeighborOrder::second);
  art.spectral = std::make_shared<const CarSpectral>(nb);
  PosteriorSamples s;
  s.beta = Eigen::MatrixXd::Constant(5, 1, 0.2);
  s.rho = Eigen::VectorXd::Constant(5, 0.5);
  s.gamma2 = Eigen::VectorXd::Ones(5);
  // training latents were not stored
  s.z_train.resize(5, 0);
  RngStream rng(1, 0);
  CHECK_THROWS_AS(predict_latent(s, art, 3, rng), validation_error);
  s.z_train = Eigen::MatrixXd::Zero(5, 3);
  CHECK_NOTHROW(predict_latent(s, art, 3, rng));
  CHECK_THROWS_AS(predict_latent(s, art, 9, rng), validation_error);
  CHECK_THROWS_AS(predict_latent(s, art, -1, rng), validation_error);
}
