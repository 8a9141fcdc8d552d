#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spclass/grid.hpp"

namespace spclass {

// A gridded binary-classification dataset.
//
// X is the n-by-ell design matrix whose first column is the intercept
// (all ones); the remaining columns hold covariates.  y[i] is 0 or 1, or
// -1 when the response at site i is unrecorded.  test_mask[i] == 1 marks a
// site whose response is hidden from fitting (used later for test error).
struct Dataset {
  Eigen::MatrixXd X;
  std::vector<int> y;
  std::vector<GridCoord> coords;
  std::vector<char> test_mask;

  int n() const { return static_cast<int>(X.rows()); }
  int ell() const { return static_cast<int>(X.cols()); }

  std::vector<int> train_indices() const;
  std::vector<int> test_indices() const;

  // Throws validation_error on inconsistent sizes, non-finite X, a
  // non-constant intercept column, out-of-range y codes, or duplicate
  // coordinates.
  void validate() const;
};

// Column statistics for centering/scaling covariates.  Fitted on a chosen
// row subset (typically the training rows) and applied to any rows, so test
// points are standardized with training statistics.  The intercept column
// (index 0) is always passed through untouched.
struct Standardizer {
  Eigen::VectorXd mean;  // per design column; 0 for intercept
  Eigen::VectorXd scale; // per design column; 1 for intercept or constant cols

  static Standardizer fit(const Eigen::MatrixXd& X, const std::vector<int>& rows);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd apply_row(const Eigen::VectorXd& x) const;
};

// Applies Standardizer::fit on the training rows to all rows of d.X,
// in place.  Returns the fitted standardizer.
Standardizer standardize_covariates(Dataset& d);

// CSV interchange: header "row,col,y,x1,...,xK,is_test" where K = ell-1
// (the intercept column is implicit in the file and added on read).  An
// empty y field means the response is unrecorded (-1 in memory).  Numeric
// fields are written with round-trip precision so write/read is lossless
// and re-running a deterministic pipeline reproduces files byte-for-byte.
Dataset read_data_csv(const std::string& path);
void write_data_csv(const std::string& path, const Dataset& d);

}  // namespace spclass
