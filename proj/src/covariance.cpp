#include "spclass/covariance.hpp"

#include <cmath>

#include "spclass/errors.hpp"

namespace spclass {

Eigen::MatrixXd symmetrized_weights(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    Eigen::VectorXd dinv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double d = A.row(i).sum();
        dinv[i] = 1.0 / std::sqrt(d > 0.0 ? d : 1.0);
    }
    return dinv.asDiagonal() * A * dinv.asDiagonal();
}

Eigen::MatrixXd car_dependence(const Eigen::MatrixXd& W, double rho) {
    if (rho < 0.0 || rho >= 1.0)
        throw validation_error("car_dependence: rho must lie in [0,1)");
    const Eigen::Index n = W.rows();
    Eigen::MatrixXd A = (W.array() > 0.0).cast<double>();
    if (!A.isApprox(A.transpose()))
        throw validation_error("car_dependence: W is not row-standardized binary adjacency");
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - rho * symmetrized_weights(A);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw numeric_error("car_dependence: I - rho*Ws failed to factorize");
    return llt.solve(Eigen::MatrixXd::Identity(n, n));
}

CarSpectral::CarSpectral(const NeighborhoodMatrix& nb) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized_weights(nb.A));
    if (es.info() != Eigen::Success)
        throw numeric_error("CarSpectral: eigendecomposition failed");
    V_ = es.eigenvectors();
    lam_ = es.eigenvalues();
}

Eigen::VectorXd CarSpectral::scale_factors(double rho) const {
    if (rho < 0.0 || rho >= 1.0)
        throw validation_error("CarSpectral: rho must lie in [0,1)");
    return (1.0 - rho * lam_.array()).inverse().matrix();
}

Eigen::MatrixXd CarSpectral::dependence(double rho) const {
    const int n = this->n();
    Eigen::VectorXd g = scale_factors(rho);
    Eigen::MatrixXd C = V_ * g.cwiseSqrt().asDiagonal();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    T.selfadjointView<Eigen::Lower>().rankUpdate(C);
    T.triangularView<Eigen::StrictlyUpper>() = T.transpose();
    return T;
}

Eigen::MatrixXd CarSpectral::dependence_block(double rho, const std::vector<int>& rows,
                                              const std::vector<int>& cols) const {
    Eigen::VectorXd g = scale_factors(rho);
    Eigen::MatrixXd Vr(rows.size(), V_.cols()), Vc(cols.size(), V_.cols());
    for (size_t i = 0; i < rows.size(); ++i) Vr.row(i) = V_.row(rows[i]);
    for (size_t j = 0; j < cols.size(); ++j) Vc.row(j) = V_.row(cols[j]);
    return Vr * g.asDiagonal() * Vc.transpose();
}

Eigen::VectorXd CarSpectral::dependence_diag(double rho, const std::vector<int>& idx) const {
    Eigen::VectorXd g = scale_factors(rho);
    Eigen::VectorXd out(idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
        out[static_cast<Eigen::Index>(i)] =
            (V_.row(idx[i]).array().square() * g.transpose().array()).sum();
    return out;
}

double CarSpectral::log_det(double rho) const {
    return -((1.0 - rho * lam_.array()).log().sum());
}

Eigen::VectorXd CarSpectral::sample_sigma_star(double rho, double kappa, double gamma2,
                                               RngStream& rng) const {
    if (kappa < 0.0 || kappa > 1.0)
        throw validation_error("CarSpectral: kappa must lie in [0,1]");
    if (!(gamma2 > 0.0)) throw validation_error("CarSpectral: gamma2 must be positive");
    const Eigen::VectorXd s =
        ((1.0 - kappa) + kappa * scale_factors(rho).array()).sqrt().matrix();
    Eigen::VectorXd xi(n());
    for (int i = 0; i < n(); ++i) xi[i] = rng.normal();
    return std::sqrt(gamma2) * (V_ * s.cwiseProduct(xi));
}

Eigen::MatrixXd assemble_sigma_star(const Eigen::MatrixXd& K, double kappa, double gamma2) {
    if (kappa < 0.0 || kappa > 1.0)
        throw validation_error("assemble_sigma_star: kappa must lie in [0,1]");
    if (!(gamma2 > 0.0)) throw validation_error("assemble_sigma_star: gamma2 must be positive");
    const Eigen::Index n = K.rows();
    return gamma2 * ((1.0 - kappa) * Eigen::MatrixXd::Identity(n, n) + kappa * K);
}

Eigen::MatrixXd exponential_correlation(const std::vector<GridCoord>& coords, double theta) {
    if (!(theta > 0.0)) throw validation_error("exponential_correlation: theta must be positive");
    const int n = static_cast<int>(coords.size());
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i) {
        R(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            double dr = coords[i].row - coords[j].row;
            double dc = coords[i].col - coords[j].col;
            double d = std::sqrt(dr * dr + dc * dc);
            R(i, j) = R(j, i) = std::exp(-d / theta);
        }
    }
    return R;
}

ConditionalNormal conditional_normal(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                     const Eigen::VectorXd& observed) {
    const Eigen::Index n = observed.size();
    if (mean.size() != n + 1 || cov.rows() != n + 1 || cov.cols() != n + 1)
        throw validation_error("conditional_normal: size mismatch between mean, cov, observed");
    if (n == 0) return {mean[0], cov(0, 0)};

    Eigen::MatrixXd S22 = cov.bottomRightCorner(n, n);
    Eigen::VectorXd s12 = cov.block(1, 0, n, 1);
    Eigen::LLT<Eigen::MatrixXd> llt(S22);
    if (llt.info() != Eigen::Success)
        throw numeric_error("conditional_normal: covariance of observed block is not PD");
    Eigen::VectorXd w = llt.solve(s12);

    ConditionalNormal out;
    out.mean = mean[0] + w.dot(observed - mean.tail(n));
    out.var = cov(0, 0) - w.dot(s12);
    if (out.var < 0.0) out.var = 0.0;  // duplicated-location limit, roundoff only
    return out;
}

}  // namespace spclass
