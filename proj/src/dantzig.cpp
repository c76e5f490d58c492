#include "sisreg/dantzig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sisreg {

void LinearProgram::validate() const {
  const Eigen::Index nv = c.size();
  const Eigen::Index m = A_ub.rows();
  require(nv >= 1, ErrorCode::BadSpec, "LP needs at least one variable");
  require(A_ub.cols() == nv && b_ub.size() == m, ErrorCode::BadSpec,
          "LP dimensions are inconsistent");
  require(c.allFinite() && A_ub.allFinite() && b_ub.allFinite(),
          ErrorCode::BadSpec, "LP entries must be finite");
  require(free_var.empty() ||
              static_cast<Eigen::Index>(free_var.size()) == nv,
          ErrorCode::BadSpec, "free_var length mismatch");
}

double DantzigConfig::resolved_lambda(int d) const {
  require(sigma > 0.0, ErrorCode::BadSpec, "dantzig sigma must be positive");
  if (lambda_d >= 0.0) return lambda_d;
  return std::sqrt(2.0 * std::log(static_cast<double>(d)));
}

LinearProgram build_dantzig_lp(const MatrixXd& Z_sub, const VectorXd& y,
                               const DantzigConfig& cfg) {
  const int d = static_cast<int>(Z_sub.cols());
  require(d >= 1, ErrorCode::BadSize, "build_dantzig_lp needs d >= 1");
  const double bound = cfg.resolved_lambda(d) * cfg.sigma;
  const VectorXd t = Z_sub.transpose() * y;
  const MatrixXd G = Z_sub.transpose() * Z_sub;

  // Variables (u, zeta+, zeta-), all nonnegative; 4d inequality rows.
  LinearProgram lp;
  lp.c = VectorXd::Zero(3 * d);
  lp.c.head(d).setOnes();
  lp.A_ub = MatrixXd::Zero(4 * d, 3 * d);
  lp.b_ub = VectorXd::Zero(4 * d);
  for (int i = 0; i < d; ++i) {
    // zeta_i <= u_i and -zeta_i <= u_i
    lp.A_ub(i, i) = -1.0;
    lp.A_ub(i, d + i) = 1.0;
    lp.A_ub(i, 2 * d + i) = -1.0;
    lp.A_ub(d + i, i) = -1.0;
    lp.A_ub(d + i, d + i) = -1.0;
    lp.A_ub(d + i, 2 * d + i) = 1.0;
  }
  // Z^T(y - Z zeta) <= bound  ->  -G zeta <= bound - t
  lp.A_ub.block(2 * d, d, d, d) = -G;
  lp.A_ub.block(2 * d, 2 * d, d, d) = G;
  lp.b_ub.segment(2 * d, d) = VectorXd::Constant(d, bound) - t;
  // -Z^T(y - Z zeta) <= bound  ->  G zeta <= bound + t
  lp.A_ub.block(3 * d, d, d, d) = G;
  lp.A_ub.block(3 * d, 2 * d, d, d) = -G;
  lp.b_ub.segment(3 * d, d) = VectorXd::Constant(d, bound) + t;
  return lp;
}

namespace {

constexpr double kPivotEps = 1e-11;

// Dense tableau with explicit basis bookkeeping. Columns are
// [structural | slack | artificial | rhs].
//
// Entering rule: most negative reduced cost, switching to Bland's
// anti-cycling rule (lowest eligible index) whenever the objective has
// stalled; leaving ties always break on the smallest basic index.
struct Tableau {
  MatrixXd T;              // (m+1) x (ncols+1); last row = reduced costs
  std::vector<int> basis;  // basic column per row
  int m = 0;
  int n_enterable = 0;  // columns eligible to enter (excludes artificials)
  int ncols = 0;        // total variable columns
  int stall = 0;
  double last_obj = std::numeric_limits<double>::infinity();

  double& rhs(int i) { return T(i, ncols); }
  double obj() const { return -T(m, ncols); }

  void pivot(int row, int col) {
    T.row(row) /= T(row, col);
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      const double f = T(i, col);
      if (f != 0.0) T.row(i) -= f * T.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  enum class Step { Optimal, Pivoted, Unbounded };
  Step step(double tol) {
    const bool bland = stall > m;
    int enter = -1;
    double most_negative = -tol;
    for (int j = 0; j < n_enterable; ++j) {
      const double rc = T(m, j);
      if (rc < most_negative) {
        enter = j;
        if (bland) break;
        most_negative = rc;
      }
    }
    if (enter < 0) return Step::Optimal;
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = T(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = std::max(rhs(i), 0.0) / a;
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio &&
           basis[static_cast<std::size_t>(i)] <
               basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return Step::Unbounded;
    pivot(leave, enter);
    const double now = obj();
    if (now < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
      stall = 0;
      last_obj = now;
    } else {
      ++stall;
    }
    return Step::Pivoted;
  }

  void reset_rule() {
    stall = 0;
    last_obj = std::numeric_limits<double>::infinity();
  }
};

}  // namespace

SimplexResult simplex_solve(const LinearProgram& lp, double tol,
                            int max_pivots) {
  lp.validate();
  require(tol > 0.0 && max_pivots >= 1, ErrorCode::BadSpec,
          "simplex needs positive tol and pivot budget");

  // Split free variables into positive and negative parts.
  const int nv = static_cast<int>(lp.c.size());
  std::vector<int> neg_part(static_cast<std::size_t>(nv), -1);
  int nv_ext = nv;
  for (int j = 0; j < nv; ++j)
    if (!lp.free_var.empty() && lp.free_var[static_cast<std::size_t>(j)])
      neg_part[static_cast<std::size_t>(j)] = nv_ext++;

  const int m = static_cast<int>(lp.A_ub.rows());
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (lp.b_ub[i] < 0.0) art_rows.push_back(i);
  const int n_art = static_cast<int>(art_rows.size());
  const int n_struct = nv_ext + m;  // structural + slack
  const int ncols = n_struct + n_art;

  Tableau tab;
  tab.m = m;
  tab.ncols = ncols;
  tab.n_enterable = n_struct;
  tab.T = MatrixXd::Zero(m + 1, ncols + 1);
  tab.basis.assign(static_cast<std::size_t>(m), -1);

  for (int i = 0; i < m; ++i) {
    const double sign = lp.b_ub[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < nv; ++j) {
      const double a = sign * lp.A_ub(i, j);
      tab.T(i, j) = a;
      if (neg_part[static_cast<std::size_t>(j)] >= 0)
        tab.T(i, neg_part[static_cast<std::size_t>(j)]) = -a;
    }
    tab.T(i, nv_ext + i) = sign;  // slack (surplus after negation)
    tab.T(i, ncols) = sign * lp.b_ub[i];
  }
  for (int k = 0; k < n_art; ++k) {
    const int i = art_rows[static_cast<std::size_t>(k)];
    tab.T(i, n_struct + k) = 1.0;
    tab.basis[static_cast<std::size_t>(i)] = n_struct + k;
  }
  for (int i = 0; i < m; ++i)
    if (tab.basis[static_cast<std::size_t>(i)] < 0)
      tab.basis[static_cast<std::size_t>(i)] = nv_ext + i;

  int pivots = 0;
  auto run = [&](void) -> void {
    while (true) {
      const auto step = tab.step(tol);
      if (step == Tableau::Step::Optimal) return;
      if (step == Tableau::Step::Unbounded)
        fail(ErrorCode::Unbounded, "LP is unbounded");
      if (++pivots > max_pivots)
        fail(ErrorCode::PivotLimit, "simplex pivot limit exceeded");
    }
  };

  if (n_art > 0) {
    // Phase 1: drive the artificial variables to zero.
    for (int k = 0; k < n_art; ++k) tab.T(m, n_struct + k) = 1.0;
    for (int i : art_rows) tab.T.row(m) -= tab.T.row(i);
    run();
    if (tab.obj() > tol * (1.0 + lp.b_ub.cwiseAbs().maxCoeff()))
      fail(ErrorCode::Infeasible, "LP is infeasible");
    // Pivot any artificial still in the basis out on a structural column.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < n_struct) continue;
      for (int j = 0; j < n_struct; ++j) {
        if (std::abs(tab.T(i, j)) > kPivotEps) {
          tab.pivot(i, j);
          break;
        }
      }
      // A row with no eligible column is redundant; its artificial stays
      // basic at value zero and never re-enters the objective.
    }
  }

  // Phase 2: original costs.
  tab.T.row(m).setZero();
  for (int j = 0; j < nv; ++j) {
    tab.T(m, j) = lp.c[j];
    if (neg_part[static_cast<std::size_t>(j)] >= 0)
      tab.T(m, neg_part[static_cast<std::size_t>(j)]) = -lp.c[j];
  }
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis[static_cast<std::size_t>(i)];
    const double cb = tab.T(m, b);
    if (cb != 0.0) tab.T.row(m) -= cb * tab.T.row(i);
  }
  run();

  VectorXd x_ext = VectorXd::Zero(nv_ext);
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis[static_cast<std::size_t>(i)];
    if (b < nv_ext) x_ext[b] = tab.rhs(i);
  }
  SimplexResult res;
  res.x = VectorXd(nv);
  for (int j = 0; j < nv; ++j) {
    double v = x_ext[j];
    if (neg_part[static_cast<std::size_t>(j)] >= 0)
      v -= x_ext[neg_part[static_cast<std::size_t>(j)]];
    res.x[j] = v;
  }
  res.objective = lp.c.dot(res.x);
  res.pivots = pivots;
  return res;
}

ModelEstimate dantzig_select(const MatrixXd& Z_sub, const VectorXd& y,
                             const DantzigConfig& cfg) {
  const int d = static_cast<int>(Z_sub.cols());
  require(y.size() == Z_sub.rows(), ErrorCode::LengthMismatch,
          "dantzig_select response length mismatch");
  const LinearProgram lp = build_dantzig_lp(Z_sub, y, cfg);
  const SimplexResult sol = simplex_solve(lp, cfg.lp_tol, cfg.max_pivots);

  VectorXd beta = sol.x.segment(d, d) - sol.x.segment(2 * d, d);
  const double bound = cfg.resolved_lambda(d) * cfg.sigma;
  const double resid_inf =
      (Z_sub.transpose() * (y - Z_sub * beta)).cwiseAbs().maxCoeff();
  const double allowance =
      cfg.lp_tol * (1.0 + lp.b_ub.cwiseAbs().maxCoeff());
  require(resid_inf <= bound + allowance, ErrorCode::SingularSystem,
          "dantzig solution violates the correlation constraint");
  require(std::abs(beta.cwiseAbs().sum() - sol.objective) <=
              cfg.lp_tol * (1.0 + std::abs(sol.objective)),
          ErrorCode::SingularSystem,
          "dantzig objective does not match the l1 norm");

  for (int j = 0; j < d; ++j)
    if (std::abs(beta[j]) <= cfg.lp_tol) beta[j] = 0.0;
  return ModelEstimate::from_beta(std::move(beta), sol.objective,
                                  sol.pivots);
}

IndexSet hard_threshold_topk(const ModelEstimate& est, int k) {
  const int d = static_cast<int>(est.beta.size());
  require(k >= 1 && k <= d, ErrorCode::BadSize,
          "hard_threshold_topk: k must be in [1, d]");
  IndexSet order(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) order[static_cast<std::size_t>(j)] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = std::abs(est.beta[a]), vb = std::abs(est.beta[b]);
    if (va != vb) return va > vb;
    return a < b;
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace sisreg
