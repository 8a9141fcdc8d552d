#include "spclass/samplers.hpp"

#include <cmath>
#include <limits>

#include "spclass/errors.hpp"
#include "spclass/mathx.hpp"

namespace spclass {

namespace {

constexpr double kTailCut = 4.0;  // standardized bound beyond which rejection takes over

// Lower-truncated standard normal, X > a, via Robert's shifted-exponential
// rejection. Valid for any a; efficient for a >= 0.
double tail_truncnorm(double a, RngStream& rng) {
    const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        double z = a - std::log(rng.uniform()) / alpha;
        double d = z - alpha;
        if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
    }
}

// Standardized draw on (a, b).
double std_truncnorm(double a, double b, RngStream& rng) {
    const double inf = std::numeric_limits<double>::infinity();
    if (a == -inf && b == inf) return rng.normal();
    if (a == -inf) return -std_truncnorm(-b, inf, rng);

    if (b == inf) {
        if (a <= kTailCut) {
            // Work on the survivor scale: Phi_c(X) | X>a is U(0, Phi_c(a)), and the
            // quantile near 0 keeps full precision where 1-p would round to 1.
            double pc = normal_cdf(-a);
            return -normal_quantile(pc * rng.uniform());
        }
        return tail_truncnorm(a, rng);
    }

    if (a > kTailCut) {
        // Both bounds in the far upper tail. Uniform rejection when the band is
        // narrow, one-sided rejection thinned to (a,b) when it is wide.
        double wide = 2.0 * std::sqrt(std::exp(1.0)) / (a + std::sqrt(a * a + 4.0)) *
                      std::exp(0.25 * (a * a - a * std::sqrt(a * a + 4.0)));
        if (b - a > wide) {
            for (;;) {
                double z = tail_truncnorm(a, rng);
                if (z < b) return z;
            }
        }
        for (;;) {
            double z = a + (b - a) * rng.uniform();
            if (std::log(rng.uniform()) <= 0.5 * (a * a - z * z)) return z;
        }
    }
    if (b < -kTailCut) return -std_truncnorm(-b, -a, rng);

    double pa = normal_cdf(a), pb = normal_cdf(b);
    for (;;) {
        double z = normal_quantile(pa + rng.uniform() * (pb - pa));
        if (z > a && z < b) return z;
    }
}

double spectral_var_zero(const Eigen::VectorXd& seg) {
    const Eigen::Index n = seg.size();
    const double mean = seg.mean();
    Eigen::VectorXd x = seg.array() - mean;
    const int m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    double c0 = x.squaredNorm() / n;
    if (c0 <= 0.0) throw numeric_error("geweke_z: segment has zero variance");
    double s = c0;
    for (int k = 1; k <= m; ++k) {
        double ck = x.head(n - k).dot(x.tail(n - k)) / n;
        s += 2.0 * (1.0 - static_cast<double>(k) / (m + 1)) * ck;
    }
    // A heavily negatively autocorrelated segment can push the Bartlett sum
    // below zero; floor it so the z statistic stays defined.
    return std::max(s, 1e-12 * c0);
}

}  // namespace

double truncated_normal_sample(double mu, double sigma2, double lower, double upper,
                               RngStream& rng) {
    if (!(sigma2 > 0.0)) throw validation_error("truncated_normal_sample: sigma2 must be positive");
    if (!(lower < upper)) throw validation_error("truncated_normal_sample: lower must be < upper");
    const double sd = std::sqrt(sigma2);
    for (;;) {
        double z = std_truncnorm((lower - mu) / sd, (upper - mu) / sd, rng);
        double x = mu + sd * z;
        if (x > lower && x < upper) return x;  // guard against rounding onto a bound
    }
}

double gamma_sample(double shape, RngStream& rng) {
    if (!(shape > 0.0)) throw validation_error("gamma_sample: shape must be positive");
    if (shape < 1.0) {
        double u = rng.uniform();
        return gamma_sample(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double scaled_inv_chisq_sample(double a, double b, RngStream& rng) {
    if (!(a > 0.0) || !(b > 0.0))
        throw validation_error("scaled_inv_chisq_sample: a and b must be positive");
    double chi2 = 2.0 * gamma_sample(0.5 * a, rng);
    return b / chi2;
}

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                           RngStream& rng) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw numeric_error("mvn_sample: covariance is not positive definite");
    return mvn_sample_chol(mean, llt.matrixL(), rng);
}

Eigen::VectorXd mvn_sample_chol(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_lower,
                                RngStream& rng) {
    Eigen::VectorXd z(mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return mean + chol_lower.triangularView<Eigen::Lower>() * z;
}

bool rw_metropolis_step(MetropolisState& state,
                        const std::function<double(double)>& log_target,
                        double& current_log_target, double lower, double upper, RngStream& rng) {
    ++state.attempts;
    double prop = state.current + state.proposal_sd * rng.normal();
    if (!(prop > lower && prop < upper)) return false;
    double lt = log_target(prop);
    if (std::isnan(lt)) return false;
    if (std::log(rng.uniform()) < lt - current_log_target) {
        state.current = prop;
        current_log_target = lt;
        ++state.accepts;
        return true;
    }
    return false;
}

bool rw_metropolis_step(MetropolisState& state,
                        const std::function<double(double)>& log_target, double lower,
                        double upper, RngStream& rng) {
    double lt = log_target(state.current);
    return rw_metropolis_step(state, log_target, lt, lower, upper, rng);
}

double geweke_z(const Eigen::VectorXd& chain, double first_frac, double last_frac) {
    const Eigen::Index n = chain.size();
    if (n < 100) throw validation_error("geweke_z: chain must have at least 100 draws");
    if (first_frac <= 0.0 || last_frac <= 0.0 || first_frac + last_frac > 1.0)
        throw validation_error("geweke_z: segment fractions invalid");
    const Eigen::Index n1 = static_cast<Eigen::Index>(std::floor(first_frac * n));
    const Eigen::Index n2 = static_cast<Eigen::Index>(std::floor(last_frac * n));
    Eigen::VectorXd s1 = chain.head(n1), s2 = chain.tail(n2);
    double v1 = spectral_var_zero(s1), v2 = spectral_var_zero(s2);
    return (s1.mean() - s2.mean()) / std::sqrt(v1 / n1 + v2 / n2);
}

}  // namespace spclass
