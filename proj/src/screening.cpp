#include "sisreg/screening.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sisreg/core.hpp"
#include "sisreg/kernels.hpp"

namespace sisreg {

RidgeLambda RidgeLambda::finite(double v) {
  require(v >= 0.0 && std::isfinite(v), ErrorCode::BadSpec,
          "ridge lambda must be finite and nonnegative");
  return {false, v};
}

ScreeningResult sis_rank(const StandardizedDesign& sd) {
  VectorXd omega;
  kernels::col_dots(sd.Z, sd.y_centered, omega);
  return ScreeningResult::from_omega(std::move(omega),
                                     static_cast<int>(sd.p()));
}

ScreeningResult sis_screen(const StandardizedDesign& sd, int d) {
  require(d >= 1 && d <= sd.p(), ErrorCode::BadSize,
          "sis_screen: d must be in [1, p]");
  VectorXd omega;
  kernels::col_dots(sd.Z, sd.y_centered, omega);
  return ScreeningResult::from_omega(std::move(omega), d);
}

namespace {

// Ranking permutation of |v| descending, ties by ascending index.
IndexSet rank_by_magnitude(const VectorXd& v) {
  IndexSet order(static_cast<std::size_t>(v.size()));
  for (int j = 0; j < v.size(); ++j) order[static_cast<std::size_t>(j)] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = std::abs(v[a]), vb = std::abs(v[b]);
    if (va != vb) return va > vb;
    return a < b;
  });
  return order;
}

VectorXd ridge_omega(const MatrixXd& Z, const VectorXd& y,
                     RidgeLambda lambda) {
  const Eigen::Index n = Z.rows(), p = Z.cols();
  if (lambda.infinite) {
    VectorXd omega;
    kernels::col_dots(Z, y, omega);
    return omega;
  }
  if (lambda.value == 0.0) {
    require(p < n, ErrorCode::SingularSystem,
            "lambda = 0 requires fewer columns than rows");
    Eigen::ColPivHouseholderQR<MatrixXd> qr(Z);
    qr.setThreshold(1e-10);
    require(qr.rank() == p, ErrorCode::SingularSystem,
            "lambda = 0 with singular Z^T Z");
    return qr.solve(y);
  }
  if (p > n) {
    // (Z^T Z + lambda I)^{-1} Z^T y = Z^T (Z Z^T + lambda I)^{-1} y:
    // O(n^2 p) instead of O(p^3).
    MatrixXd K = Z * Z.transpose();
    K.diagonal().array() += lambda.value;
    const VectorXd alpha = Eigen::LLT<MatrixXd>(K).solve(y);
    return Z.transpose() * alpha;
  }
  MatrixXd G = Z.transpose() * Z;
  G.diagonal().array() += lambda.value;
  return Eigen::LLT<MatrixXd>(G).solve(Z.transpose() * y);
}

}  // namespace

IndexSet itrrs_step(const MatrixXd& Z_cur, const VectorXd& y,
                    RidgeLambda lambda, double delta) {
  const int p_cur = static_cast<int>(Z_cur.cols());
  require(p_cur >= 2, ErrorCode::BadSize, "itrrs_step needs p_cur >= 2");
  require(delta > 0.0 && delta < 1.0, ErrorCode::BadSpec,
          "itrrs delta must be in (0,1)");
  const int keep = static_cast<int>(std::floor(delta * p_cur));
  require(keep >= 1, ErrorCode::BadSize,
          "itrrs_step would retain an empty set");
  const VectorXd omega = ridge_omega(Z_cur, y, lambda);
  IndexSet order = rank_by_magnitude(omega);
  order.resize(static_cast<std::size_t>(keep));
  std::sort(order.begin(), order.end());
  return order;
}

ScreeningResult itrrs_screen(const StandardizedDesign& sd,
                             const ItrrsConfig& cfg,
                             std::vector<IndexSet>* step_trace) {
  const int n = static_cast<int>(sd.n());
  const int p = static_cast<int>(sd.p());
  require(cfg.delta > 0.0 && cfg.delta < 1.0, ErrorCode::BadSpec,
          "itrrs delta must be in (0,1)");
  require(cfg.d_final >= 1 && cfg.d_final < n, ErrorCode::BadSpec,
          "itrrs d_final must satisfy 1 <= d_final < n");
  require(p > cfg.d_final, ErrorCode::BadSize,
          "itrrs_screen: p must exceed d_final");
  if (step_trace) step_trace->clear();

  IndexSet current(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) current[static_cast<std::size_t>(j)] = j;
  VectorXd last_omega;

  while (static_cast<int>(current.size()) > cfg.d_final &&
         current.size() > 1) {
    MatrixXd Z_cur = submatrix(sd.Z, current);
    const VectorXd omega = ridge_omega(Z_cur, sd.y_centered, cfg.lambda);
    IndexSet order = rank_by_magnitude(omega);
    int keep = static_cast<int>(
        std::floor(cfg.delta * static_cast<double>(current.size())));
    keep = std::max(keep, 1);
    IndexSet next(static_cast<std::size_t>(keep));
    for (int k = 0; k < keep; ++k)
      next[static_cast<std::size_t>(k)] =
          current[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    std::sort(next.begin(), next.end());
    current = std::move(next);
    if (step_trace) step_trace->push_back(current);
    if (keep == 1) break;
  }

  // Final statistics on the surviving columns; everything eliminated gets 0,
  // so the ranking is the survivors in final order, then the rest by index.
  {
    MatrixXd Z_fin = submatrix(sd.Z, current);
    last_omega = ridge_omega(Z_fin, sd.y_centered, cfg.lambda);
  }
  VectorXd full = VectorXd::Zero(p);
  for (std::size_t k = 0; k < current.size(); ++k)
    full[current[k]] = last_omega[static_cast<Eigen::Index>(k)];
  return ScreeningResult::from_omega(std::move(full),
                                     static_cast<int>(current.size()));
}

IsisResult isis_select(const StandardizedDesign& sd, const IsisConfig& cfg,
                       const InnerSelector& inner) {
  const int n = static_cast<int>(sd.n());
  const int p = static_cast<int>(sd.p());
  const int inner_d = cfg.inner_d > 0 ? cfg.inner_d : submodel_size(n);
  const int max_steps = cfg.max_steps > 0 ? cfg.max_steps : cfg.d_total;
  require(cfg.d_total >= 1 && cfg.d_total < n, ErrorCode::BadSpec,
          "isis d_total must satisfy 1 <= d_total < n");
  require(inner_d >= 1 && inner_d <= cfg.d_total, ErrorCode::BadSpec,
          "isis inner_d must satisfy 1 <= inner_d <= d_total");

  IsisResult res;
  std::vector<bool> taken(static_cast<std::size_t>(p), false);
  VectorXd response = sd.y_centered;
  const double y_norm = sd.y_centered.norm();

  for (int step = 0; step < max_steps; ++step) {
    IndexSet remaining;
    remaining.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j)
      if (!taken[static_cast<std::size_t>(j)]) remaining.push_back(j);
    if (remaining.empty()) break;

    const MatrixXd Z_rem = submatrix(sd.Z, remaining);
    InnerSelection pick = inner(Z_rem, response);
    require(!pick.local_indices.empty(), ErrorCode::BadSpec,
            "isis inner selector returned an empty set at step " +
                std::to_string(step + 1));

    // Map to original coordinates, trim overflow by largest magnitude.
    const int room = cfg.d_total - static_cast<int>(res.selected.size());
    IndexSet order(pick.local_indices.size());
    for (std::size_t k = 0; k < order.size(); ++k)
      order[k] = static_cast<int>(k);
    if (static_cast<int>(pick.local_indices.size()) > room) {
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(pick.magnitudes[a]);
        const double mb = std::abs(pick.magnitudes[b]);
        if (ma != mb) return ma > mb;
        return remaining[static_cast<std::size_t>(pick.local_indices[a])] <
               remaining[static_cast<std::size_t>(pick.local_indices[b])];
      });
      order.resize(static_cast<std::size_t>(room));
    }
    IndexSet group;
    group.reserve(order.size());
    for (int k : order)
      group.push_back(remaining[static_cast<std::size_t>(
          pick.local_indices[static_cast<std::size_t>(k)])]);
    std::sort(group.begin(), group.end());
    for (int j : group) taken[static_cast<std::size_t>(j)] = true;
    res.selected.insert(res.selected.end(), group.begin(), group.end());
    res.groups.push_back(std::move(group));

    if (static_cast<int>(res.selected.size()) >= cfg.d_total) break;

    // Refit on the whole union so the residual is orthogonal to every
    // selected column, then screen the remainder against it.
    IndexSet sel_sorted = res.selected;
    std::sort(sel_sorted.begin(), sel_sorted.end());
    const MatrixXd Z_sel = submatrix(sd.Z, sel_sorted);
    VectorXd coef;
    try {
      coef = ols_fit(Z_sel, sd.y_centered);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::RankDeficient)
        fail(ErrorCode::RankDeficient,
             "isis residual fit failed at step " + std::to_string(step + 1) +
                 ": " + e.what());
      throw;
    }
    response = sd.y_centered - Z_sel * coef;
    if (response.norm() <= 1e-12 * std::max(1.0, y_norm)) break;
  }

  std::sort(res.selected.begin(), res.selected.end());
  return res;
}

ScreeningResult classif_screen(const StandardizedDesign& sd,
                               const VectorXd& labels, int d) {
  require(labels.size() == sd.n(), ErrorCode::LengthMismatch,
          "classif_screen label length mismatch");
  int n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    require(labels[i] == 1.0 || labels[i] == -1.0, ErrorCode::BadInput,
            "labels must be +1 or -1");
    (labels[i] > 0 ? n_pos : n_neg)++;
  }
  require(n_pos > 0 && n_neg > 0, ErrorCode::OneClassOnly,
          "classif_screen needs both classes present");
  require(d >= 1 && d <= sd.p(), ErrorCode::BadSize,
          "classif_screen: d must be in [1, p]");
  VectorXd omega;
  kernels::col_dots(sd.Z, labels, omega);
  return ScreeningResult::from_omega(std::move(omega), d);
}

}  // namespace sisreg
