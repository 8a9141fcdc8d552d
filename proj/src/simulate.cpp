#include "spclass/simulate.hpp"

#include <cmath>
#include <memory>
#include <numeric>

#include "spclass/errors.hpp"

namespace spclass {

std::string linear_component_name(LinearComponent lc) {
  switch (lc) {
    case LinearComponent::intercept: return "intercept";
    case LinearComponent::simple1: return "simple1";
    case LinearComponent::simple2: return "simple2";
    case LinearComponent::multiple: return "multiple";
    case LinearComponent::confounded: return "confounded";
  }
  throw validation_error("unknown linear component enum");
}

LinearComponent linear_component_from_name(const std::string& name) {
  if (name == "intercept") return LinearComponent::intercept;
  if (name == "simple1") return LinearComponent::simple1;
  if (name == "simple2") return LinearComponent::simple2;
  if (name == "multiple") return LinearComponent::multiple;
  if (name == "confounded") return LinearComponent::confounded;
  throw validation_error("unknown linear component name: " + name);
}

void Scenario::validate() const {
  if (rows < 1 || cols < 1) throw validation_error("scenario: grid must be non-empty");
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw validation_error("scenario: kappa must lie in [0,1]");
  if (!(rho >= 0.0 && rho < 1.0)) throw validation_error("scenario: rho must lie in [0,1)");
  if (!(gamma2 > 0.0)) throw validation_error("scenario: gamma2 must be positive");
}

int Scenario::n_covariates() const {
  switch (linear_component) {
    case LinearComponent::intercept: return 0;
    case LinearComponent::simple1:
    case LinearComponent::simple2:
    case LinearComponent::confounded: return 1;
    case LinearComponent::multiple: return 3;
  }
  throw validation_error("unknown linear component enum");
}

Eigen::VectorXd Scenario::coefficients() const {
  Eigen::VectorXd b(1 + n_covariates());
  b[0] = 0.1;
  switch (linear_component) {
    case LinearComponent::intercept: break;
    case LinearComponent::simple1:
    case LinearComponent::confounded: b[1] = -std::sqrt(2.0); break;
    case LinearComponent::simple2: b[1] = -std::sqrt(8.0); break;
    case LinearComponent::multiple:
      b[1] = -std::sqrt(2.0);
      b[2] = 2.0;
      b[3] = 2.0;
      break;
  }
  return b;
}

Dataset simulate_dataset(const Scenario& sc, RngStream& rng, const CarSpectral* spectral) {
  sc.validate();
  const GridDomain dom{sc.rows, sc.cols};
  const int n = dom.n();
  const int k = sc.n_covariates();
  const bool needs_spectral =
      sc.kappa > 0.0 || sc.linear_component == LinearComponent::confounded;

  std::unique_ptr<CarSpectral> owned;
  if (needs_spectral && !spectral) {
    owned = std::make_unique<CarSpectral>(build_grid_neighbors(dom, sc.neighbor_order));
    spectral = owned.get();
  }
  if (spectral && spectral->n() != n)
    throw validation_error("simulate: supplied spectral decomposition has the wrong size");

  Dataset d;
  d.X.resize(n, 1 + k);
  d.X.col(0).setOnes();
  switch (sc.linear_component) {
    case LinearComponent::intercept:
      break;
    case LinearComponent::simple1:
    case LinearComponent::simple2:
      for (int i = 0; i < n; ++i) d.X(i, 1) = rng.uniform(-0.5, 0.5);
      break;
    case LinearComponent::multiple:
      for (int i = 0; i < n; ++i) d.X(i, 1) = rng.uniform(-0.5, 0.5);
      for (int i = 0; i < n; ++i) d.X(i, 2) = rng.uniform(0.0, 0.5);
      for (int i = 0; i < n; ++i) d.X(i, 3) = rng.uniform(-0.5, 0.0);
      break;
    case LinearComponent::confounded:
      d.X.col(1) = spectral->sample_sigma_star(sc.rho, 1.0, 1.0, rng);
      break;
  }

  Eigen::VectorXd noise(n);
  if (sc.kappa == 0.0) {
    const double g = std::sqrt(sc.gamma2);
    for (int i = 0; i < n; ++i) noise[i] = g * rng.normal();
  } else {
    noise = spectral->sample_sigma_star(sc.rho, sc.kappa, sc.gamma2, rng);
  }

  const Eigen::VectorXd mean = d.X * sc.coefficients();
  d.y.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) d.y[static_cast<size_t>(i)] = mean[i] + noise[i] >= 0.0 ? 1 : 0;
  d.coords = dom.coords();
  d.test_mask.assign(static_cast<size_t>(n), 0);
  d.validate();
  return d;
}

Dataset simulate_dataset(const Scenario& sc) {
  RngStream rng(sc.replicate_seed, 0);
  return simulate_dataset(sc, rng);
}

std::vector<char> clustered_test_split(const GridDomain& dom, int n_seeds, int per_seed,
                                       RngStream& rng) {
  if (dom.rows < 3 || dom.cols < 3)
    throw validation_error("clustered split: grid must be at least 3x3");
  if (n_seeds < 1 || n_seeds > dom.n())
    throw validation_error("clustered split: seed count must lie in [1, n]");
  if (per_seed < 0 || per_seed > 8)
    throw validation_error("clustered split: neighbors per seed must lie in [0, 8]");

  // distinct focal cells by partial Fisher-Yates
  std::vector<int> idx(static_cast<size_t>(dom.n()));
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < n_seeds; ++j) {
    const int m = j + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dom.n() - j)));
    std::swap(idx[static_cast<size_t>(j)], idx[static_cast<size_t>(m)]);
  }

  static constexpr int kOff[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                     {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  std::vector<char> mask(static_cast<size_t>(dom.n()), 0);
  for (int s = 0; s < n_seeds; ++s) {
    const int focal = idx[static_cast<size_t>(s)];
    mask[static_cast<size_t>(focal)] = 1;
    const GridCoord c = dom.coord(focal);
    // per_seed of the 8 unbounded-lattice neighbors, without replacement
    int off[8] = {0, 1, 2, 3, 4, 5, 6, 7};
    for (int j = 0; j < per_seed; ++j) {
      const int m = j + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(8 - j)));
      std::swap(off[j], off[m]);
    }
    for (int j = 0; j < per_seed; ++j) {
      const int r = c.row + kOff[off[j]][0];
      const int cc = c.col + kOff[off[j]][1];
      if (dom.contains(r, cc)) mask[static_cast<size_t>(dom.index(r, cc))] = 1;
    }
  }
  return mask;
}

double test_fraction(const std::vector<char>& mask) {
  if (mask.empty()) return 0.0;
  double s = 0.0;
  for (char m : mask) s += m ? 1.0 : 0.0;
  return s / static_cast<double>(mask.size());
}

}  // namespace spclass
