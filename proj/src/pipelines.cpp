#include "sisreg/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "sisreg/core.hpp"

namespace sisreg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

VectorXd scatter(const VectorXd& sub, const IndexSet& cols, int p) {
  VectorXd full = VectorXd::Zero(p);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    require(cols[k] >= 0 && cols[k] < p, ErrorCode::BadSize,
            "index mapping out of range");
    require(full[cols[k]] == 0.0 || sub[static_cast<Eigen::Index>(k)] == 0.0,
            ErrorCode::BadSize, "index mapping is not injective");
    full[cols[k]] = sub[static_cast<Eigen::Index>(k)];
  }
  return full;
}

double estimate_sigma(const StandardizedDesign& sd) {
  const int n = static_cast<int>(sd.n());
  const int d = std::min(submodel_size(n), static_cast<int>(sd.p()));
  const ScreeningResult scr = sis_screen(sd, std::max(d, 1));
  const MatrixXd Z_sub = submatrix(sd.Z, scr.selected);
  const VectorXd coef = ols_fit(Z_sub, sd.y_centered);
  const double rss = (sd.y_centered - Z_sub * coef).squaredNorm();
  const int dof = n - static_cast<int>(scr.selected.size());
  return std::sqrt(rss / std::max(dof, 1));
}

}  // namespace

PipelineKind pipeline_kind_from_name(const std::string& name) {
  static const std::map<std::string, PipelineKind> table = {
      {"SIS_SCAD", PipelineKind::SIS_SCAD},
      {"SIS_DS", PipelineKind::SIS_DS},
      {"SIS_DS_SCAD", PipelineKind::SIS_DS_SCAD},
      {"SIS_DS_ADALASSO", PipelineKind::SIS_DS_ADALASSO},
      {"ISIS_SCAD", PipelineKind::ISIS_SCAD},
      {"SIS_SCAD_LD", PipelineKind::SIS_SCAD_LD},
      {"SIS_SCAD_NB", PipelineKind::SIS_SCAD_NB},
  };
  const auto it = table.find(name);
  require(it != table.end(), ErrorCode::ConfigError,
          "unknown pipeline name: " + name);
  return it->second;
}

std::string pipeline_name(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::SIS_SCAD: return "SIS_SCAD";
    case PipelineKind::SIS_DS: return "SIS_DS";
    case PipelineKind::SIS_DS_SCAD: return "SIS_DS_SCAD";
    case PipelineKind::SIS_DS_ADALASSO: return "SIS_DS_ADALASSO";
    case PipelineKind::ISIS_SCAD: return "ISIS_SCAD";
    case PipelineKind::SIS_SCAD_LD: return "SIS_SCAD_LD";
    case PipelineKind::SIS_SCAD_NB: return "SIS_SCAD_NB";
  }
  return "?";
}

int PipelineSpec::resolved_d(int n) const {
  if (d > 0) return d;
  switch (kind) {
    case PipelineKind::SIS_DS_SCAD:
    case PipelineKind::SIS_DS_ADALASSO:
      return n - 1;
    case PipelineKind::SIS_SCAD_LD:
    case PipelineKind::SIS_SCAD_NB:
      return static_cast<int>(
          std::floor(2.0 * n / std::log(static_cast<double>(n))));
    default:
      return submodel_size(n);
  }
}

int PipelineSpec::resolved_d_prime(int n) const {
  return d_prime > 0 ? d_prime : submodel_size(n);
}

InnerSelector make_sis_scad_selector(int inner_d, SolverConfig solver,
                                     double scad_a) {
  return [inner_d, solver, scad_a](const MatrixXd& Z_cols,
                                   const VectorXd& r) -> InnerSelection {
    VectorXd omega = Z_cols.transpose() * r;
    const int p_cur = static_cast<int>(Z_cols.cols());
    const int d = std::min(inner_d, p_cur);
    const ScreeningResult scr = ScreeningResult::from_omega(omega, d);

    const MatrixXd Z_top = submatrix(Z_cols, scr.selected);
    PenaltySpec scad;
    scad.kind = PenaltyKind::SCAD;
    scad.a = scad_a;
    const auto [lambda, est] = bic_select(Z_top, r, scad, solver);
    (void)lambda;

    InnerSelection out;
    if (est.support.empty()) {
      // Keep the iteration moving: take the top-ranked column.
      out.local_indices.push_back(scr.ranking.front());
      out.magnitudes = VectorXd::Constant(1, std::abs(omega[scr.ranking.front()]));
      return out;
    }
    out.magnitudes = VectorXd(static_cast<Eigen::Index>(est.support.size()));
    for (std::size_t k = 0; k < est.support.size(); ++k) {
      out.local_indices.push_back(scr.selected[static_cast<std::size_t>(
          est.support[k])]);
      out.magnitudes[static_cast<Eigen::Index>(k)] =
          std::abs(est.beta[est.support[k]]);
    }
    return out;
  };
}

PipelineOutcome run_pipeline(const Dataset& data, const PipelineSpec& spec) {
  const int n = static_cast<int>(data.n());
  const int p = static_cast<int>(data.p());
  // Method defaults are capped at p; an explicit out-of-range d still errors.
  const int d =
      spec.d > 0 ? spec.d : std::min(spec.resolved_d(n), p);
  require(spec.allow_d_ge_n || d < n, ErrorCode::BadSpec,
          "pipeline first-stage size d must be below n (or explicitly "
          "allowed)");
  require(d >= 1 && d <= p, ErrorCode::BadSize,
          "pipeline d out of range");
  require(spec.kind != PipelineKind::SIS_SCAD_LD &&
              spec.kind != PipelineKind::SIS_SCAD_NB,
          ErrorCode::BadSpec,
          "classification pipelines run through classify()");

  PipelineOutcome out;
  const auto t0 = Clock::now();
  const StandardizedDesign sd = standardize(data);

  auto trace = [&](const std::string& name, const IndexSet& set,
                   Clock::time_point start) {
    out.stage_trace.push_back(StageTrace{name, set, seconds_since(start)});
  };

  switch (spec.kind) {
    case PipelineKind::SIS_SCAD: {
      const ScreeningResult scr = sis_screen(sd, d);
      trace("sis_screen", scr.selected, t0);
      out.screen_set = scr.selected;
      const auto t1 = Clock::now();
      const MatrixXd Z_sub = submatrix(sd.Z, scr.selected);
      PenaltySpec scad;
      scad.kind = PenaltyKind::SCAD;
      scad.a = spec.scad_a;
      auto [lambda, est] = bic_select(Z_sub, sd.y_centered, scad, spec.solver);
      (void)lambda;
      ModelEstimate mapped = ModelEstimate::from_beta(
          scatter(est.beta, scr.selected, p), est.objective, est.iterations,
          est.converged);
      trace("scad_bic", mapped.support, t1);
      out.final_estimate = std::move(mapped);
      break;
    }
    case PipelineKind::SIS_DS: {
      const ScreeningResult scr = sis_screen(sd, d);
      trace("sis_screen", scr.selected, t0);
      out.screen_set = scr.selected;
      const auto t1 = Clock::now();
      const MatrixXd Z_sub = submatrix(sd.Z, scr.selected);
      DantzigConfig cfg = spec.dantzig;
      if (!spec.sigma_known) cfg.sigma = estimate_sigma(sd);
      const ModelEstimate est = dantzig_select(Z_sub, sd.y_centered, cfg);
      ModelEstimate mapped = ModelEstimate::from_beta(
          scatter(est.beta, scr.selected, p), est.objective, est.iterations,
          est.converged);
      trace("dantzig", mapped.support, t1);
      out.final_estimate = std::move(mapped);
      break;
    }
    case PipelineKind::SIS_DS_SCAD:
    case PipelineKind::SIS_DS_ADALASSO: {
      const ScreeningResult scr = sis_screen(sd, d);
      trace("sis_screen", scr.selected, t0);
      out.screen_set = scr.selected;
      auto t1 = Clock::now();
      const MatrixXd Z_sub = submatrix(sd.Z, scr.selected);
      DantzigConfig cfg = spec.dantzig;
      if (!spec.sigma_known) cfg.sigma = estimate_sigma(sd);
      const ModelEstimate ds = dantzig_select(Z_sub, sd.y_centered, cfg);
      const int dp = std::min(spec.resolved_d_prime(n),
                              static_cast<int>(scr.selected.size()));
      const IndexSet keep_local = hard_threshold_topk(ds, dp);
      IndexSet keep;
      keep.reserve(keep_local.size());
      for (int k : keep_local)
        keep.push_back(scr.selected[static_cast<std::size_t>(k)]);
      trace("dantzig_topk", keep, t1);

      t1 = Clock::now();
      const MatrixXd Z_keep = submatrix(sd.Z, keep);
      ModelEstimate est;
      if (spec.kind == PipelineKind::SIS_DS_SCAD) {
        PenaltySpec scad;
        scad.kind = PenaltyKind::SCAD;
        scad.a = spec.scad_a;
        est = bic_select(Z_keep, sd.y_centered, scad, spec.solver).second;
      } else {
        VectorXd base(static_cast<Eigen::Index>(keep_local.size()));
        for (std::size_t k = 0; k < keep_local.size(); ++k)
          base[static_cast<Eigen::Index>(k)] = ds.beta[keep_local[k]];
        PenaltySpec ada;
        ada.kind = PenaltyKind::AdaptiveL1;
        ada.gamma = spec.adalasso_gamma;
        ada.base_beta = base;
        est = bic_select(Z_keep, sd.y_centered, ada, spec.solver).second;
      }
      ModelEstimate mapped = ModelEstimate::from_beta(
          scatter(est.beta, keep, p), est.objective, est.iterations,
          est.converged);
      trace(spec.kind == PipelineKind::SIS_DS_SCAD ? "scad_bic"
                                                   : "adalasso_bic",
            mapped.support, t1);
      out.final_estimate = std::move(mapped);
      break;
    }
    case PipelineKind::ISIS_SCAD: {
      IsisConfig icfg;
      icfg.d_total = d;
      const InnerSelector inner =
          make_sis_scad_selector(submodel_size(n), spec.solver, spec.scad_a);
      const IsisResult isis = isis_select(sd, icfg, inner);
      trace("isis_select", isis.selected, t0);
      out.screen_set = isis.selected;
      const auto t1 = Clock::now();
      const MatrixXd Z_sub = submatrix(sd.Z, isis.selected);
      PenaltySpec scad;
      scad.kind = PenaltyKind::SCAD;
      scad.a = spec.scad_a;
      auto [lambda, est] = bic_select(Z_sub, sd.y_centered, scad, spec.solver);
      (void)lambda;
      ModelEstimate mapped = ModelEstimate::from_beta(
          scatter(est.beta, isis.selected, p), est.objective, est.iterations,
          est.converged);
      trace("scad_bic", mapped.support, t1);
      out.final_estimate = std::move(mapped);
      break;
    }
    default:
      fail(ErrorCode::BadSpec, "unhandled pipeline");
  }

  // Supports shrink down the pipeline by construction; verify the mapping.
  for (int j : out.final_estimate.support)
    require(std::binary_search(out.screen_set.begin(), out.screen_set.end(),
                               j),
            ErrorCode::BadSize,
            "final support escaped the screening stage");
  return out;
}

ClassifyResult classify(const Dataset& train, const Dataset& test,
                        const PipelineSpec& spec, int target_size) {
  require(spec.kind == PipelineKind::SIS_SCAD_LD ||
              spec.kind == PipelineKind::SIS_SCAD_NB,
          ErrorCode::BadSpec, "classify needs SIS_SCAD_LD or SIS_SCAD_NB");
  require(target_size >= 1, ErrorCode::BadSpec,
          "classify target size must be >= 1");
  require(train.p() == test.p(), ErrorCode::LengthMismatch,
          "train and test dimension mismatch");
  const int n = static_cast<int>(train.n());
  const int p = static_cast<int>(train.p());
  const int d = std::min(spec.resolved_d(n), p);

  const StandardizedDesign sd = standardize(train);
  const ScreeningResult scr = classif_screen(sd, train.y, d);
  const MatrixXd Z_sub = submatrix(sd.Z, scr.selected);

  // Walk the BIC lambda path; keep the support closest to the target from
  // below (a larger lambda wins ties, i.e. the first hit on the way down).
  SolverConfig solver = spec.solver;
  if (solver.lambda_grid.empty())
    solver.lambda_grid = default_lambda_grid(Z_sub, train.y);
  PenaltySpec scad;
  scad.kind = PenaltyKind::SCAD;
  scad.a = spec.scad_a;
  VectorXd warm = VectorXd::Zero(Z_sub.cols());
  ModelEstimate chosen;
  int best_size = -1;
  for (double lambda : solver.lambda_grid) {
    scad.lambda = lambda;
    ModelEstimate est = lla_fit(Z_sub, train.y, scad, solver, warm);
    warm = est.beta;
    const int size = static_cast<int>(est.support.size());
    if (size <= target_size && size > best_size) {
      best_size = size;
      chosen = std::move(est);
      if (best_size == target_size) break;
    }
  }
  require(best_size >= 1, ErrorCode::TargetSizeUnreachable,
          "no lambda on the grid yields a usable model of size <= target");

  ClassifyResult res;
  res.estimate = chosen;
  for (int k : chosen.support)
    res.selected_features.push_back(scr.selected[static_cast<std::size_t>(k)]);

  // Standardize the test matrix with the training statistics.
  const auto z_row = [&](const Dataset& ds, int i, int col_global) {
    return (ds.X(i, col_global) - sd.col_means[col_global]) /
           sd.col_scales[col_global];
  };

  if (spec.kind == PipelineKind::SIS_SCAD_LD) {
    // score(x) = beta . (z - midpoint of the class mean scores)
    const int k = static_cast<int>(chosen.support.size());
    VectorXd mu_pos = VectorXd::Zero(k), mu_neg = VectorXd::Zero(k);
    int n_pos = 0, n_neg = 0;
    for (int i = 0; i < n; ++i) {
      VectorXd z(k);
      for (int c = 0; c < k; ++c)
        z[c] = z_row(train, i, res.selected_features[static_cast<std::size_t>(c)]);
      if (train.y[i] > 0) {
        mu_pos += z;
        ++n_pos;
      } else {
        mu_neg += z;
        ++n_neg;
      }
    }
    mu_pos /= n_pos;
    mu_neg /= n_neg;
    VectorXd beta_sel(k);
    for (int c = 0; c < k; ++c) beta_sel[c] = chosen.beta[chosen.support[c]];
    const double mid = beta_sel.dot(mu_pos + mu_neg) / 2.0;
    const auto predict = [&](const Dataset& ds, int i) {
      double score = -mid;
      for (int c = 0; c < k; ++c)
        score += beta_sel[c] *
                 z_row(ds, i, res.selected_features[static_cast<std::size_t>(c)]);
      return score >= 0.0 ? 1.0 : -1.0;
    };
    for (int i = 0; i < n; ++i)
      if (predict(train, i) != train.y[i]) ++res.train_errors;
    for (int i = 0; i < test.n(); ++i)
      if (predict(test, i) != test.y[i]) ++res.test_errors;
    return res;
  }

  // Naive Bayes on the selected features: per-class Gaussian fits with
  // empirical priors.
  const int k = static_cast<int>(res.selected_features.size());
  VectorXd mean_pos = VectorXd::Zero(k), mean_neg = VectorXd::Zero(k);
  VectorXd var_pos = VectorXd::Zero(k), var_neg = VectorXd::Zero(k);
  int n_pos = 0, n_neg = 0;
  for (int i = 0; i < n; ++i) (train.y[i] > 0 ? n_pos : n_neg)++;
  require(n_pos > 1 && n_neg > 1, ErrorCode::OneClassOnly,
          "naive Bayes needs at least two samples per class");
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      const double z =
          z_row(train, i, res.selected_features[static_cast<std::size_t>(c)]);
      if (train.y[i] > 0)
        mean_pos[c] += z;
      else
        mean_neg[c] += z;
    }
  }
  mean_pos /= n_pos;
  mean_neg /= n_neg;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      const double z =
          z_row(train, i, res.selected_features[static_cast<std::size_t>(c)]);
      if (train.y[i] > 0)
        var_pos[c] += (z - mean_pos[c]) * (z - mean_pos[c]);
      else
        var_neg[c] += (z - mean_neg[c]) * (z - mean_neg[c]);
    }
  }
  var_pos /= (n_pos - 1);
  var_neg /= (n_neg - 1);
  const double var_floor = 1e-9;
  const double log_prior_pos = std::log(static_cast<double>(n_pos) / n);
  const double log_prior_neg = std::log(static_cast<double>(n_neg) / n);
  const auto predict_nb = [&](const Dataset& ds, int i) {
    double lp = log_prior_pos, ln = log_prior_neg;
    for (int c = 0; c < k; ++c) {
      const double z =
          z_row(ds, i, res.selected_features[static_cast<std::size_t>(c)]);
      const double vp = std::max(var_pos[c], var_floor);
      const double vn = std::max(var_neg[c], var_floor);
      lp += -0.5 * std::log(vp) - (z - mean_pos[c]) * (z - mean_pos[c]) / (2 * vp);
      ln += -0.5 * std::log(vn) - (z - mean_neg[c]) * (z - mean_neg[c]) / (2 * vn);
    }
    return lp >= ln ? 1.0 : -1.0;
  };
  for (int i = 0; i < n; ++i)
    if (predict_nb(train, i) != train.y[i]) ++res.train_errors;
  for (int i = 0; i < test.n(); ++i)
    if (predict_nb(test, i) != test.y[i]) ++res.test_errors;
  return res;
}

}  // namespace sisreg
