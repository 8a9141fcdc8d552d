#pragma once

#include <Eigen/Dense>

namespace spclass {

struct MoranBasis {
    Eigen::MatrixXd M;        // P A P with P the projection orthogonal to the design
    Eigen::MatrixXd vectors;  // n x r, eigenvectors of the r largest eigenvalues
    Eigen::VectorXd values;   // r, descending
};

// Spatial basis for the reduced-rank fit. r = ceil(r_frac * n). Eigenvalue ties
// are broken by descending value then ascending position; each eigenvector's
// sign is fixed so its largest-magnitude entry is positive.
MoranBasis moran_operator(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A,
                          double r_frac = 0.10);

}  // namespace spclass
