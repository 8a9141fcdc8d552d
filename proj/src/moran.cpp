#include "spclass/moran.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "spclass/errors.hpp"

namespace spclass {

MoranBasis moran_operator(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A, double r_frac) {
    const Eigen::Index n = A.rows();
    if (X.rows() != n) throw validation_error("moran_operator: X and A row counts differ");
    if (r_frac < 0.0 || r_frac > 1.0)
        throw validation_error("moran_operator: r_frac must lie in [0,1]");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols())
        throw validation_error("moran_operator: design matrix is rank deficient");

    Eigen::MatrixXd XtXinv = (X.transpose() * X).ldlt().solve(
        Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - X * XtXinv * X.transpose();

    MoranBasis out;
    out.M = P * A * P;
    Eigen::MatrixXd Msym = 0.5 * (out.M + out.M.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Msym);
    if (es.info() != Eigen::Success) throw numeric_error("moran_operator: eigensolver failed");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()[a] > es.eigenvalues()[b];
    });

    const int r = static_cast<int>(std::ceil(r_frac * static_cast<double>(n)));
    out.vectors.resize(n, r);
    out.values.resize(r);
    for (int k = 0; k < r; ++k) {
        Eigen::VectorXd v = es.eigenvectors().col(order[k]);
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v[imax] < 0.0) v = -v;
        out.vectors.col(k) = v;
        out.values[k] = es.eigenvalues()[order[k]];
    }
    return out;
}

}  // namespace spclass
