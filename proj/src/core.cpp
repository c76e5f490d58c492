#include "sisreg/core.hpp"

#include <cmath>

#include "sisreg/kernels.hpp"

namespace sisreg {

StandardizedDesign standardize(const Dataset& d, StandardizeOptions opts) {
  const int ddof = opts.denominator == SdDenominator::NMinus1 ? 1 : 0;
  StandardizedDesign sd;
  kernels::col_moments(d.X, sd.col_means, sd.col_scales, ddof);
  for (int j = 0; j < d.p(); ++j) {
    if (sd.col_scales[j] == 0.0) {
      sd.constant_cols.push_back(j);
      sd.col_scales[j] = 1.0;
    }
  }
  sd.Z = (d.X.rowwise() - sd.col_means.transpose()).array().rowwise() /
         sd.col_scales.transpose().array();
  sd.y_centered = d.y.array() - d.y.mean();
  return sd;
}

VectorXd ols_fit(const MatrixXd& Z_sub, const VectorXd& y) {
  require(Z_sub.cols() >= 1 && Z_sub.cols() < Z_sub.rows(),
          ErrorCode::BadInput, "ols_fit needs 1 <= d < n");
  require(y.size() == Z_sub.rows(), ErrorCode::LengthMismatch,
          "ols_fit response length mismatch");
  Eigen::ColPivHouseholderQR<MatrixXd> qr(Z_sub);
  qr.setThreshold(1e-10);
  require(qr.rank() == Z_sub.cols(), ErrorCode::RankDeficient,
          "ols_fit: columns are numerically collinear");
  return qr.solve(y);
}

double l2_error(const ModelEstimate& est, const GroundTruth& gt) {
  require(est.beta.size() == gt.beta_true.size(), ErrorCode::LengthMismatch,
          "l2_error length mismatch");
  return (est.beta - gt.beta_true).norm();
}

int submodel_size(int n) {
  return static_cast<int>(std::floor(n / std::log(static_cast<double>(n))));
}

MatrixXd submatrix(const MatrixXd& Z, const IndexSet& cols) {
  MatrixXd out(Z.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(k) = Z.col(cols[k]);
  return out;
}

}  // namespace sisreg
