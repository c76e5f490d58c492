#pragma once

#include <Eigen/Dense>

namespace sisreg::kernels {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Column-parallel kernels. Each column is accumulated by one thread in a
// fixed order, so results are bit-identical to the serial reference for any
// thread count.

/// out[j] = Z(:,j) . v for every column j.
void col_dots(const MatrixXd& Z, const VectorXd& v, VectorXd& out);
void col_dots_serial(const MatrixXd& Z, const VectorXd& v, VectorXd& out);

/// Column means and standard deviations. ddof = 1 gives the n-1 denominator,
/// ddof = 0 the n denominator. A zero-variance column reports sd 0.
void col_moments(const MatrixXd& X, VectorXd& mean, VectorXd& sd, int ddof);
void col_moments_serial(const MatrixXd& X, VectorXd& mean, VectorXd& sd,
                        int ddof);

/// max_j |corr(X(:,j), X(:,ref))| over j != ref (sample correlation).
double max_abs_corr_vs(const MatrixXd& X, int ref);
double max_abs_corr_vs_serial(const MatrixXd& X, int ref);

}  // namespace sisreg::kernels
