#include "sisreg/penalized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sisreg/core.hpp"
#include "sisreg/kernels.hpp"

namespace sisreg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}
}  // namespace

void PenaltySpec::validate(Eigen::Index d) const {
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorCode::BadSpec,
          "penalty lambda must be nonnegative");
  switch (kind) {
    case PenaltyKind::L1:
      break;
    case PenaltyKind::SCAD:
      require(a > 2.0, ErrorCode::BadSpec, "SCAD requires a > 2");
      break;
    case PenaltyKind::MCP:
      require(a > 0.0, ErrorCode::BadSpec, "MCP requires a > 0");
      break;
    case PenaltyKind::AdaptiveL1:
      require(gamma >= 0.0, ErrorCode::BadSpec,
              "adaptive penalty requires gamma >= 0");
      require(base_beta.size() > 0, ErrorCode::BadSpec,
              "adaptive penalty requires base_beta");
      if (d >= 0)
        require(base_beta.size() == d, ErrorCode::BadSpec,
                "adaptive base_beta length mismatch");
      break;
  }
}

void SolverConfig::validate() const {
  require(max_outer >= 1 && max_inner >= 1, ErrorCode::BadSpec,
          "solver iteration caps must be >= 1");
  require(tol > 0.0, ErrorCode::BadSpec, "solver tol must be positive");
  for (std::size_t k = 1; k < lambda_grid.size(); ++k)
    require(lambda_grid[k] < lambda_grid[k - 1], ErrorCode::BadSpec,
            "lambda grid must be strictly descending");
  for (double l : lambda_grid)
    require(l > 0.0, ErrorCode::BadSpec, "lambda grid must be positive");
}

std::vector<double> default_lambda_grid(const MatrixXd& Z_sub,
                                        const VectorXd& y, int size,
                                        double min_ratio) {
  VectorXd corr;
  kernels::col_dots(Z_sub, y, corr);
  const double lambda_max =
      corr.cwiseAbs().maxCoeff() / static_cast<double>(Z_sub.rows());
  std::vector<double> grid(static_cast<std::size_t>(size));
  if (lambda_max <= 0.0) {
    // Degenerate response; any positive grid selects the empty model.
    for (int k = 0; k < size; ++k)
      grid[static_cast<std::size_t>(k)] =
          std::pow(10.0, -static_cast<double>(k) / (size - 1));
    return grid;
  }
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(lambda_max * min_ratio);
  for (int k = 0; k < size; ++k) {
    const double f = size == 1 ? 0.0
                               : static_cast<double>(k) /
                                     static_cast<double>(size - 1);
    grid[static_cast<std::size_t>(k)] =
        std::exp(log_max + f * (log_min - log_max));
  }
  return grid;
}

double penalty_deriv(const PenaltySpec& spec, double t, int coord) {
  spec.validate();
  require(t >= 0.0, ErrorCode::BadSpec, "penalty derivative needs t >= 0");
  const double lambda = spec.lambda;
  switch (spec.kind) {
    case PenaltyKind::L1:
      return lambda;
    case PenaltyKind::SCAD: {
      if (t <= lambda) return lambda;
      const double excess = spec.a * lambda - t;
      return excess > 0.0 ? excess / (spec.a - 1.0) : 0.0;
    }
    case PenaltyKind::MCP: {
      const double excess = spec.a * lambda - t;
      return excess > 0.0 ? excess / spec.a : 0.0;
    }
    case PenaltyKind::AdaptiveL1: {
      require(coord >= 0 && coord < spec.base_beta.size(), ErrorCode::BadSpec,
              "adaptive penalty derivative needs a coordinate index");
      const double base = std::abs(spec.base_beta[coord]);
      if (base == 0.0) return kInf;
      return lambda / std::pow(base, spec.gamma);
    }
  }
  return 0.0;
}

double penalty_value(const PenaltySpec& spec, double t, int coord) {
  spec.validate();
  require(t >= 0.0, ErrorCode::BadSpec, "penalty value needs t >= 0");
  const double lambda = spec.lambda;
  switch (spec.kind) {
    case PenaltyKind::L1:
      return lambda * t;
    case PenaltyKind::SCAD: {
      const double a = spec.a;
      if (t <= lambda) return lambda * t;
      if (t < a * lambda)
        return (2.0 * a * lambda * t - t * t - lambda * lambda) /
               (2.0 * (a - 1.0));
      return lambda * lambda * (a + 1.0) / 2.0;
    }
    case PenaltyKind::MCP: {
      const double a = spec.a;
      if (t < a * lambda) return lambda * t - t * t / (2.0 * a);
      return a * lambda * lambda / 2.0;
    }
    case PenaltyKind::AdaptiveL1: {
      const double w = penalty_deriv(spec, 0.0, coord);
      if (w == kInf) return t == 0.0 ? 0.0 : kInf;
      return w * t;
    }
  }
  return 0.0;
}

ModelEstimate weighted_lasso_cd(const MatrixXd& Z_sub, const VectorXd& y,
                                const VectorXd& weights,
                                const SolverConfig& cfg,
                                const VectorXd& init) {
  cfg.validate();
  const Eigen::Index n = Z_sub.rows();
  const Eigen::Index d = Z_sub.cols();
  require(d >= 1, ErrorCode::BadSize, "weighted_lasso_cd needs d >= 1");
  require(y.size() == n, ErrorCode::LengthMismatch,
          "weighted_lasso_cd response length mismatch");
  require(weights.size() == d, ErrorCode::LengthMismatch,
          "weighted_lasso_cd weights length mismatch");
  for (Eigen::Index j = 0; j < d; ++j)
    require(weights[j] >= 0.0 && !std::isnan(weights[j]), ErrorCode::BadSpec,
            "weights must be nonnegative");

  VectorXd beta = init.size() == d ? init : VectorXd::Zero(d);
  require(init.size() == 0 || init.size() == d, ErrorCode::LengthMismatch,
          "weighted_lasso_cd init length mismatch");
  for (Eigen::Index j = 0; j < d; ++j)
    if (weights[j] == kInf) beta[j] = 0.0;

  const double inv_n = 1.0 / static_cast<double>(n);
  VectorXd col_sq(d);
  for (Eigen::Index j = 0; j < d; ++j)
    col_sq[j] = Z_sub.col(j).squaredNorm() * inv_n;
  VectorXd r = y - Z_sub * beta;

  int sweeps = 0;
  bool converged = false;
  while (sweeps < cfg.max_inner) {
    ++sweeps;
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (weights[j] == kInf || col_sq[j] == 0.0) continue;
      const double old = beta[j];
      const double g = inv_n * Z_sub.col(j).dot(r) + col_sq[j] * old;
      const double updated = soft_threshold(g, weights[j]) / col_sq[j];
      if (updated != old) {
        r.noalias() += Z_sub.col(j) * (old - updated);
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (max_change <= cfg.tol) {
      converged = true;
      break;
    }
  }

  double obj = 0.5 * inv_n * r.squaredNorm();
  for (Eigen::Index j = 0; j < d; ++j)
    if (beta[j] != 0.0) obj += weights[j] * std::abs(beta[j]);
  return ModelEstimate::from_beta(std::move(beta), obj, sweeps, converged);
}

double kkt_violation(const MatrixXd& Z_sub, const VectorXd& y,
                     const VectorXd& weights, const VectorXd& beta) {
  const double inv_n = 1.0 / static_cast<double>(Z_sub.rows());
  const VectorXd r = y - Z_sub * beta;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < Z_sub.cols(); ++j) {
    if (weights[j] == kInf) continue;
    const double g = inv_n * Z_sub.col(j).dot(r);
    if (beta[j] == 0.0)
      worst = std::max(worst, std::abs(g) - weights[j]);
    else
      worst = std::max(worst,
                       std::abs(g - weights[j] * (beta[j] > 0 ? 1.0 : -1.0)));
  }
  return worst;
}

namespace {

double penalized_objective(const MatrixXd& Z, const VectorXd& y,
                           const PenaltySpec& spec, const VectorXd& beta) {
  const double inv_n = 1.0 / static_cast<double>(Z.rows());
  double obj = 0.5 * inv_n * (y - Z * beta).squaredNorm();
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    obj += penalty_value(spec, std::abs(beta[j]), static_cast<int>(j));
  return obj;
}

}  // namespace

ModelEstimate lla_fit(const MatrixXd& Z_sub, const VectorXd& y,
                      const PenaltySpec& spec, const SolverConfig& cfg,
                      const VectorXd& init,
                      std::vector<double>* objective_trace) {
  spec.validate(Z_sub.cols());
  cfg.validate();
  const Eigen::Index d = Z_sub.cols();
  require(init.size() == d, ErrorCode::LengthMismatch,
          "lla_fit init length mismatch");
  if (objective_trace) objective_trace->clear();

  VectorXd beta = init;
  VectorXd w(d);
  ModelEstimate est;
  int outer = 0;
  bool converged = false;
  while (outer < cfg.max_outer) {
    ++outer;
    for (Eigen::Index j = 0; j < d; ++j)
      w[j] = penalty_deriv(spec, std::abs(beta[j]), static_cast<int>(j));
    est = weighted_lasso_cd(Z_sub, y, w, cfg, beta);
    const double change = (est.beta - beta).cwiseAbs().maxCoeff();
    beta = est.beta;
    if (objective_trace)
      objective_trace->push_back(penalized_objective(Z_sub, y, spec, beta));
    if (change <= cfg.tol) {
      converged = est.converged;
      break;
    }
  }
  return ModelEstimate::from_beta(std::move(beta),
                                  penalized_objective(Z_sub, y, spec,
                                                      est.beta),
                                  outer, converged);
}

std::pair<double, ModelEstimate> bic_select(const MatrixXd& Z_sub,
                                            const VectorXd& y,
                                            PenaltySpec spec_family,
                                            const SolverConfig& cfg) {
  SolverConfig local = cfg;
  if (local.lambda_grid.empty())
    local.lambda_grid = default_lambda_grid(Z_sub, y);
  local.validate();
  const double n = static_cast<double>(Z_sub.rows());

  VectorXd warm = lla_default_init(Z_sub, y);
  double best_bic = kInf;
  double best_lambda = local.lambda_grid.front();
  ModelEstimate best;
  bool have_best = false;
  for (double lambda : local.lambda_grid) {
    spec_family.lambda = lambda;
    ModelEstimate est = lla_fit(Z_sub, y, spec_family, local, warm);
    warm = est.beta;
    const double rss = (y - Z_sub * est.beta).squaredNorm();
    const double bic = n * std::log(std::max(rss, 1e-300) / n) +
                       static_cast<double>(est.support.size()) * std::log(n);
    if (!have_best || bic < best_bic) {
      have_best = true;
      best_bic = bic;
      best_lambda = lambda;
      best = std::move(est);
    }
  }
  return {best_lambda, std::move(best)};
}

ModelEstimate adaptive_lasso_fit(const MatrixXd& Z_sub, const VectorXd& y,
                                 double lambda, double gamma,
                                 const VectorXd& base_beta,
                                 const SolverConfig& cfg) {
  PenaltySpec spec;
  spec.kind = PenaltyKind::AdaptiveL1;
  spec.lambda = lambda;
  spec.gamma = gamma;
  spec.base_beta = base_beta;
  spec.validate(Z_sub.cols());
  return lla_fit(Z_sub, y, spec, cfg, VectorXd::Zero(Z_sub.cols()));
}

VectorXd lla_default_init(const MatrixXd& Z_sub, const VectorXd& y) {
  const int n = static_cast<int>(Z_sub.rows());
  const int d = static_cast<int>(Z_sub.cols());
  if (d <= submodel_size(n)) {
    try {
      return ols_fit(Z_sub, y);
    } catch (const Error&) {
      // Collinear screened columns: fall through to the lasso start.
    }
  }
  return VectorXd::Zero(d);
}

}  // namespace sisreg
