#pragma once

#include "sisreg/types.hpp"

namespace sisreg {

/// min c.x subject to A_ub x <= b_ub, with each variable bounded below by 0
/// or free (free_var true).
struct LinearProgram {
  VectorXd c;
  MatrixXd A_ub;
  VectorXd b_ub;
  std::vector<bool> free_var;  // empty means all variables >= 0

  void validate() const;
};

struct DantzigConfig {
  double lambda_d = -1.0;  // < 0 means sqrt(2 log d)
  double sigma = 1.0;
  double lp_tol = 1e-8;
  int max_pivots = 200000;

  double resolved_lambda(int d) const;
};

struct SimplexResult {
  VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

/// The l1-minimization recast as a linear program over (u, zeta+, zeta-):
/// min sum u_i with -u <= zeta <= u and
/// -lambda*sigma*1 <= Z^T (y - Z zeta) <= lambda*sigma*1.
LinearProgram build_dantzig_lp(const MatrixXd& Z_sub, const VectorXd& y,
                               const DantzigConfig& cfg);

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
/// Deterministic: a fixed input yields a fixed pivot sequence.
SimplexResult simplex_solve(const LinearProgram& lp, double tol,
                            int max_pivots);

/// Solve the Dantzig program on the given columns; coefficients with
/// magnitude <= lp_tol are snapped to zero.
ModelEstimate dantzig_select(const MatrixXd& Z_sub, const VectorXd& y,
                             const DantzigConfig& cfg);

/// Indices of the k largest |beta_j| (ties broken by ascending index),
/// returned sorted ascending.
IndexSet hard_threshold_topk(const ModelEstimate& est, int k);

}  // namespace sisreg
