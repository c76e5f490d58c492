#pragma once

#include "sisreg/types.hpp"

namespace sisreg {

enum class PenaltyKind { L1, SCAD, MCP, AdaptiveL1 };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::L1;
  double lambda = 0.0;
  double a = 3.7;       // concavity parameter; SCAD needs a > 2, MCP a > 0
  double gamma = 0.0;   // adaptive exponent >= 0
  VectorXd base_beta;   // reference coefficients for adaptive weights

  void validate(Eigen::Index d = -1) const;
};

struct SolverConfig {
  int max_outer = 20;
  int max_inner = 1000;
  double tol = 1e-7;
  std::vector<double> lambda_grid;  // strictly descending positive values

  void validate() const;
};

/// 50 log-spaced values from lambda_max = max_j |Z_j^T y| / n down to
/// 1e-3 * lambda_max.
std::vector<double> default_lambda_grid(const MatrixXd& Z_sub,
                                        const VectorXd& y,
                                        int size = 50,
                                        double min_ratio = 1e-3);

/// Penalty derivative p'_lambda(t) at t >= 0. AdaptiveL1 is per-coordinate;
/// pass the coordinate index (the two-argument form rejects it).
double penalty_deriv(const PenaltySpec& spec, double t, int coord = -1);

/// p_lambda(t) = integral of the derivative from 0 to t, in closed form.
double penalty_value(const PenaltySpec& spec, double t, int coord = -1);

/// Cyclic coordinate descent for
///   min (1/2n) ||y - Z b||^2 + sum_j w_j |b_j|.
/// A weight of +infinity pins the coordinate to zero. Returns KKT-certified
/// stationary point; sets converged = false if max_inner sweeps were spent.
ModelEstimate weighted_lasso_cd(const MatrixXd& Z_sub, const VectorXd& y,
                                const VectorXd& weights,
                                const SolverConfig& cfg,
                                const VectorXd& init = VectorXd());

/// Largest KKT stationarity violation of beta for the weighted-L1 problem;
/// the solver's acceptance oracle.
double kkt_violation(const MatrixXd& Z_sub, const VectorXd& y,
                     const VectorXd& weights, const VectorXd& beta);

/// Local linear approximation: repeatedly reweight by the penalty derivative
/// at the current coefficients and solve the weighted lasso. The per-outer
/// penalized objective (monotone non-increasing) goes to objective_trace
/// when provided.
ModelEstimate lla_fit(const MatrixXd& Z_sub, const VectorXd& y,
                      const PenaltySpec& spec, const SolverConfig& cfg,
                      const VectorXd& init,
                      std::vector<double>* objective_trace = nullptr);

/// Fit along the descending lambda grid with warm starts and return the
/// lambda minimizing BIC = n log(RSS/n) + |support| log(n). Ties prefer the
/// larger lambda.
std::pair<double, ModelEstimate> bic_select(const MatrixXd& Z_sub,
                                            const VectorXd& y,
                                            PenaltySpec spec_family,
                                            const SolverConfig& cfg);

/// Weighted lasso with weights lambda / |base_beta_j|^gamma; a zero base
/// coefficient pins that coordinate to zero.
ModelEstimate adaptive_lasso_fit(const MatrixXd& Z_sub, const VectorXd& y,
                                 double lambda, double gamma,
                                 const VectorXd& base_beta,
                                 const SolverConfig& cfg);

/// Zero when d is large (near n), OLS when d is small enough
/// (d <= [n/log n]) for the least-squares fit to be stable.
VectorXd lla_default_init(const MatrixXd& Z_sub, const VectorXd& y);

}  // namespace sisreg
