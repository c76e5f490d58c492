#pragma once

#include "sisreg/types.hpp"

namespace sisreg {

enum class SdDenominator { NMinus1, N };

struct StandardizeOptions {
  SdDenominator denominator = SdDenominator::NMinus1;
};

/// Center each column to mean 0 and scale to sample standard deviation 1.
/// Constant columns get scale 1, an all-zero Z column, and are flagged.
StandardizedDesign standardize(const Dataset& d, StandardizeOptions opts = {});

/// Least-squares coefficients of y on the columns of Z_sub (d < n), via
/// column-pivoted QR with pivot tolerance 1e-10. Throws RankDeficient when
/// the columns are numerically collinear.
VectorXd ols_fit(const MatrixXd& Z_sub, const VectorXd& y);

/// ||est.beta - gt.beta_true||_2.
double l2_error(const ModelEstimate& est, const GroundTruth& gt);

/// [n / log n] with natural log; the paper's default submodel size.
int submodel_size(int n);

/// Copy of the named columns, in the given order.
MatrixXd submatrix(const MatrixXd& Z, const IndexSet& cols);

}  // namespace sisreg
