#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sisreg/errors.hpp"

namespace sisreg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using IndexSet = std::vector<int>;  // kept sorted ascending when used as a set

/// Response vector plus raw design matrix. Validates shape and finiteness on
/// construction.
struct Dataset {
  VectorXd y;
  MatrixXd X;
  std::vector<std::string> feature_names;  // empty or size p

  Dataset(VectorXd y_in, MatrixXd X_in,
          std::vector<std::string> names = {});

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Column-centered, column-scaled design with the centering statistics kept
/// so X is exactly reconstructible as Z*diag(col_scales) + 1*col_means^T.
struct StandardizedDesign {
  MatrixXd Z;
  VectorXd col_means;
  VectorXd col_scales;  // strictly positive (1 for constant columns)
  VectorXd y_centered;
  IndexSet constant_cols;  // columns with zero sample variance, zeroed in Z

  Eigen::Index n() const { return Z.rows(); }
  Eigen::Index p() const { return Z.cols(); }
};

/// Sparse coefficient estimate on the standardized scale.
struct ModelEstimate {
  VectorXd beta;
  IndexSet support;  // exactly {j : beta[j] != 0}, sorted
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;

  static ModelEstimate from_beta(VectorXd beta, double objective,
                                 int iterations, bool converged = true);
};

struct GroundTruth {
  VectorXd beta_true;
  IndexSet true_model;  // {j : beta_true[j] != 0}, sorted
  int s = 0;
  double sigma = 0.0;

  static GroundTruth from_beta(VectorXd beta_true, double sigma);
};

/// Marginal statistics with their deterministic ranking. Ties in |omega| are
/// broken by ascending column index.
struct ScreeningResult {
  VectorXd omega;
  IndexSet ranking;   // permutation of 0..p-1, |omega| non-increasing
  IndexSet selected;  // first d of ranking, sorted ascending
  int d = 0;

  static ScreeningResult from_omega(VectorXd omega, int d);
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace sisreg
