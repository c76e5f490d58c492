#pragma once

#include <functional>

#include "sisreg/types.hpp"

namespace sisreg {

/// Ridge parameter for the iteratively thresholded ridge screener. The
/// infinite case is an explicit flag (it short-circuits to the marginal
/// statistic, no IEEE infinity enters the solve).
struct RidgeLambda {
  bool infinite = false;
  double value = 0.0;

  static RidgeLambda inf() { return {true, 0.0}; }
  static RidgeLambda finite(double v);
};

struct ItrrsConfig {
  RidgeLambda lambda = RidgeLambda::inf();
  double delta = 0.5;  // per-step retention fraction in (0,1)
  int d_final = 1;     // terminal size, < n
};

struct IsisConfig {
  int d_total = 1;    // target union size, < n
  int inner_d = 0;    // per-step screening size; 0 means [n/log n]
  int max_steps = 0;  // 0 means d_total (each step adds at least one)
};

/// One screening/selection step: given the current columns and the working
/// response, pick a nonempty local index set plus the magnitude used to
/// order each pick (for trimming the final overflowing group).
struct InnerSelection {
  IndexSet local_indices;
  VectorXd magnitudes;  // parallel to local_indices
};
using InnerSelector =
    std::function<InnerSelection(const MatrixXd& Z_cols, const VectorXd& r)>;

struct IsisResult {
  IndexSet selected;              // union of groups, sorted, size <= d_total
  std::vector<IndexSet> groups;   // disjoint per-step selections, run order
};

/// Marginal statistics omega = Z^T y_centered for every column, ranked by
/// |omega| descending (ties by ascending index).
ScreeningResult sis_rank(const StandardizedDesign& sd);

/// Top-d submodel of the marginal ranking.
ScreeningResult sis_screen(const StandardizedDesign& sd, int d);

/// Ridge coefficients on the given columns; retains the top [delta * p_cur]
/// by magnitude. Uses the n x n dual solve when p_cur > n. Returns local
/// column indices.
IndexSet itrrs_step(const MatrixXd& Z_cur, const VectorXd& y,
                    RidgeLambda lambda, double delta);

/// Repeated itrrs_step until the retained size drops to cfg.d_final or
/// below; per-step retained sets (original indices) go to step_trace when
/// provided.
ScreeningResult itrrs_screen(const StandardizedDesign& sd,
                             const ItrrsConfig& cfg,
                             std::vector<IndexSet>* step_trace = nullptr);

/// Iterative screening: run the inner selector, regress the response on
/// everything selected so far, and rescreen the remaining columns against
/// the residuals until d_total variables are collected.
IsisResult isis_select(const StandardizedDesign& sd, const IsisConfig& cfg,
                       const InnerSelector& inner);

/// Two-class screener: omega = sum of standardized rows with label +1 minus
/// sum of rows with label -1. Labels must take both values.
ScreeningResult classif_screen(const StandardizedDesign& sd,
                               const VectorXd& labels, int d);

}  // namespace sisreg
