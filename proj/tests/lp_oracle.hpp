#pragma once

// Exhaustive vertex-enumeration oracle for tiny linear programs, used to
// certify the simplex solver. Enumerates every choice of n active
// constraints (rows or bounds), solves the square system, keeps feasible
// points, and minimizes the objective over them.

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "sisreg/dantzig.hpp"

namespace sisreg::test {

inline std::optional<double> enumerate_lp_optimum(const LinearProgram& lp,
                                                  double feas_tol = 1e-9) {
  const int nv = static_cast<int>(lp.c.size());
  const int m = static_cast<int>(lp.A_ub.rows());
  // Constraint list: m inequality rows, then nv lower bounds (skip free).
  std::vector<int> all;
  for (int i = 0; i < m; ++i) all.push_back(i);
  for (int j = 0; j < nv; ++j)
    if (lp.free_var.empty() || !lp.free_var[static_cast<std::size_t>(j)])
      all.push_back(m + j);

  const int total = static_cast<int>(all.size());
  std::vector<int> pick(static_cast<std::size_t>(nv));
  double best = std::numeric_limits<double>::infinity();
  bool found = false;

  std::vector<int> stack;
  // Iterative combination enumeration.
  std::vector<int> idx(static_cast<std::size_t>(nv));
  for (int k = 0; k < nv; ++k) idx[static_cast<std::size_t>(k)] = k;
  if (nv > total) return std::nullopt;
  while (true) {
    Eigen::MatrixXd A(nv, nv);
    Eigen::VectorXd b(nv);
    for (int k = 0; k < nv; ++k) {
      const int c = all[static_cast<std::size_t>(
          idx[static_cast<std::size_t>(k)])];
      if (c < m) {
        A.row(k) = lp.A_ub.row(c);
        b[k] = lp.b_ub[c];
      } else {
        A.row(k).setZero();
        A(k, c - m) = 1.0;
        b[k] = 0.0;
      }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(b);
      bool feasible = x.allFinite();
      if (feasible)
        for (int i = 0; i < m && feasible; ++i)
          if (lp.A_ub.row(i).dot(x) > lp.b_ub[i] + feas_tol) feasible = false;
      if (feasible)
        for (int j = 0; j < nv && feasible; ++j)
          if ((lp.free_var.empty() ||
               !lp.free_var[static_cast<std::size_t>(j)]) &&
              x[j] < -feas_tol)
            feasible = false;
      if (feasible) {
        found = true;
        best = std::min(best, lp.c.dot(x));
      }
    }
    // Advance the combination.
    int k = nv - 1;
    while (k >= 0 &&
           idx[static_cast<std::size_t>(k)] == total - nv + k)
      --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < nv; ++t)
      idx[static_cast<std::size_t>(t)] =
          idx[static_cast<std::size_t>(t - 1)] + 1;
  }
  if (!found) return std::nullopt;
  return best;
}

}  // namespace sisreg::test
