#include <doctest.h>

#include <cmath>
#include <limits>

#include "sisreg/core.hpp"
#include "sisreg/penalized.hpp"
#include "sisreg/rng.hpp"

using namespace sisreg;

namespace {

// Z with Z^T Z = n I, via the Q factor of a Gaussian matrix.
Eigen::MatrixXd orthonormal_design(int n, int d, std::uint64_t seed) {
  RngStream rng(seed, 0, StreamPurpose::Design);
  Eigen::MatrixXd G(n, d);
  rng.fill_normal(G);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ())
                          .leftCols(d);
  return std::sqrt(static_cast<double>(n)) * Q;
}

PenaltySpec scad_spec(double lambda, double a = 3.7) {
  PenaltySpec s;
  s.kind = PenaltyKind::SCAD;
  s.lambda = lambda;
  s.a = a;
  return s;
}

}  // namespace

TEST_CASE("SCAD derivative hand values") {
  const PenaltySpec s = scad_spec(1.0);
  CHECK(penalty_deriv(s, 0.5) == doctest::Approx(1.0));
  CHECK(penalty_deriv(s, 2.0) == doctest::Approx((3.7 - 2.0) / 2.7));
  CHECK(penalty_deriv(s, 4.0) == doctest::Approx(0.0));
  // Continuity at the knots.
  CHECK(penalty_deriv(s, 1.0) ==
        doctest::Approx(penalty_deriv(s, 1.0 + 1e-12)));
  CHECK(penalty_deriv(s, 3.7) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("L1 derivative is constant") {
  PenaltySpec s;
  s.kind = PenaltyKind::L1;
  s.lambda = 2.0;
  for (double t : {0.0, 0.3, 1.0, 10.0})
    CHECK(penalty_deriv(s, t) == doctest::Approx(2.0));
}

TEST_CASE("MCP derivative hand values") {
  PenaltySpec s;
  s.kind = PenaltyKind::MCP;
  s.lambda = 1.0;
  s.a = 2.0;
  CHECK(penalty_deriv(s, 2.0) == doctest::Approx(0.0));
  CHECK(penalty_deriv(s, 0.0) == doctest::Approx(1.0));
  CHECK(penalty_deriv(s, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("penalty_value closed forms") {
  const PenaltySpec s = scad_spec(1.0);
  CHECK(penalty_value(s, 3.7) == doctest::Approx(2.35));
  CHECK(penalty_value(s, 5.0) == doctest::Approx(2.35));
  CHECK(penalty_value(s, 0.0) == doctest::Approx(0.0));
  PenaltySpec l1;
  l1.kind = PenaltyKind::L1;
  l1.lambda = 2.0;
  CHECK(penalty_value(l1, 3.0) == doctest::Approx(6.0));
  // The value function is the integral of the derivative: check midpoints
  // against numerical quadrature.
  for (double t : {0.5, 1.5, 2.9, 3.69}) {
    double quad = 0.0;
    const int steps = 20000;
    for (int k = 0; k < steps; ++k)
      quad += penalty_deriv(s, (k + 0.5) * t / steps) * t / steps;
    CHECK(penalty_value(s, t) == doctest::Approx(quad).epsilon(1e-6));
  }
}

TEST_CASE("spec validation rejects bad parameters") {
  CHECK_THROWS_AS(penalty_deriv(scad_spec(1.0, 2.0), 1.0), Error);  // a <= 2
  PenaltySpec mcp;
  mcp.kind = PenaltyKind::MCP;
  mcp.a = 0.0;
  CHECK_THROWS_AS(penalty_deriv(mcp, 1.0), Error);
  PenaltySpec ada;
  ada.kind = PenaltyKind::AdaptiveL1;
  ada.gamma = 0.5;
  CHECK_THROWS_AS(penalty_deriv(ada, 1.0, 0), Error);  // missing base
  ada.base_beta = Eigen::Vector2d(1.0, 0.0);
  CHECK_THROWS_AS(penalty_deriv(ada, 1.0), Error);  // missing coordinate
  CHECK(penalty_deriv(ada, 1.0, 0) == doctest::Approx(0.0));
  CHECK(penalty_deriv(ada, 1.0, 1) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("weighted lasso with zero weights reproduces least squares") {
  RngStream rng(31, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(20, 4);
  rng.fill_normal(Z);
  Eigen::VectorXd y(20);
  rng.fill_normal(y);
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const ModelEstimate est =
      weighted_lasso_cd(Z, y, Eigen::VectorXd::Zero(4), cfg);
  const Eigen::VectorXd ols = ols_fit(Z, y);
  CHECK((est.beta - ols).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("weights above the null-solution threshold give beta = 0") {
  RngStream rng(32, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(15, 5);
  rng.fill_normal(Z);
  Eigen::VectorXd y(15);
  rng.fill_normal(y);
  const double thr = (Z.transpose() * y).cwiseAbs().maxCoeff() / 15.0;
  SolverConfig cfg;
  const ModelEstimate est =
      weighted_lasso_cd(Z, y, Eigen::VectorXd::Constant(5, thr * 1.001), cfg);
  CHECK(est.beta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(est.support.empty());
}

TEST_CASE("orthonormal design solves by soft thresholding") {
  const int n = 50, d = 6;
  const Eigen::MatrixXd Z = orthonormal_design(n, d, 77);
  RngStream rng(78, 0, StreamPurpose::Generic);
  Eigen::VectorXd y(n);
  rng.fill_normal(y);
  y += Z.leftCols(2) * Eigen::Vector2d(4.0, -2.0);
  Eigen::VectorXd w(d);
  for (int j = 0; j < d; ++j) w[j] = 0.1 + 0.05 * j;
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const ModelEstimate est = weighted_lasso_cd(Z, y, w, cfg);
  const Eigen::VectorXd z = Z.transpose() * y / n;
  for (int j = 0; j < d; ++j) {
    const double soft =
        std::copysign(std::max(std::abs(z[j]) - w[j], 0.0), z[j]);
    CHECK(est.beta[j] == doctest::Approx(soft).epsilon(1e-8));
  }
}

TEST_CASE("KKT certification holds on random instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RngStream rng(seed, 3, StreamPurpose::Design);
    const int n = 30, d = 8;
    Eigen::MatrixXd Z(n, d);
    rng.fill_normal(Z);
    Eigen::VectorXd y(n);
    rng.fill_normal(y);
    Eigen::VectorXd w(d);
    for (int j = 0; j < d; ++j) w[j] = 0.02 + 0.03 * rng.next_uniform();
    SolverConfig cfg;
    const ModelEstimate est = weighted_lasso_cd(Z, y, w, cfg);
    CHECK(kkt_violation(Z, y, w, est.beta) <= 1e-6);
  }
}

TEST_CASE("infinite weights pin coordinates to zero") {
  RngStream rng(9, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(12, 3);
  rng.fill_normal(Z);
  const Eigen::VectorXd y = Z * Eigen::Vector3d(1.0, 2.0, 3.0);
  Eigen::VectorXd w(3);
  w << 0.01, std::numeric_limits<double>::infinity(), 0.01;
  SolverConfig cfg;
  const ModelEstimate est = weighted_lasso_cd(Z, y, w, cfg);
  CHECK(est.beta[1] == 0.0);
  CHECK(est.beta[0] != 0.0);
}

TEST_CASE("LLA with the L1 penalty is one weighted lasso") {
  RngStream rng(41, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(25, 5);
  rng.fill_normal(Z);
  Eigen::VectorXd y(25);
  rng.fill_normal(y);
  PenaltySpec l1;
  l1.kind = PenaltyKind::L1;
  l1.lambda = 0.08;
  SolverConfig cfg;
  cfg.tol = 1e-10;
  const ModelEstimate direct =
      weighted_lasso_cd(Z, y, Eigen::VectorXd::Constant(5, 0.08), cfg);
  const ModelEstimate viaLla = lla_fit(Z, y, l1, cfg, Eigen::VectorXd::Zero(5));
  CHECK((direct.beta - viaLla.beta).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("one SCAD outer step from zero is the lasso") {
  RngStream rng(43, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(30, 6);
  rng.fill_normal(Z);
  Eigen::VectorXd y(30);
  rng.fill_normal(y);
  const double lambda = 0.15;
  SolverConfig one;
  one.max_outer = 1;
  SolverConfig cfg;
  const ModelEstimate scad1 =
      lla_fit(Z, y, scad_spec(lambda), one, Eigen::VectorXd::Zero(6));
  const ModelEstimate lasso =
      weighted_lasso_cd(Z, y, Eigen::VectorXd::Constant(6, lambda), cfg);
  CHECK((scad1.beta - lasso.beta).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("orthonormal SCAD matches a brute-force scan per coordinate") {
  const int n = 40, d = 4;
  const Eigen::MatrixXd Z = orthonormal_design(n, d, 55);
  // Targets in the soft, transition and flat regions of the rule.
  Eigen::VectorXd target(d);
  target << 0.5, 1.7, 3.0, 5.0;
  const Eigen::VectorXd y = Z * target;  // Z^T y / n = target exactly
  const double lambda = 1.0;
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const Eigen::VectorXd init = Z.colPivHouseholderQr().solve(y);
  const ModelEstimate est = lla_fit(Z, y, scad_spec(lambda), cfg, init);

  for (int j = 0; j < d; ++j) {
    // 1-D objective 0.5 (b - z)^2 + p(|b|) over a miillion-point grid.
    const double z = target[j];
    double best_b = 0.0, best_obj = std::numeric_limits<double>::infinity();
    const int grid_n = 1000000;
    const double lo = -6.0, hi = 6.0;
    for (int g = 0; g <= grid_n; ++g) {
      const double b = lo + (hi - lo) * g / grid_n;
      const double obj = 0.5 * (b - z) * (b - z) +
                         penalty_value(scad_spec(lambda), std::abs(b));
      if (obj < best_obj) {
        best_obj = obj;
        best_b = b;
      }
    }
    CHECK(std::abs(est.beta[j] - best_b) <= 2e-5);
  }
}

TEST_CASE("LLA objective is non-increasing across outer iterations") {
  RngStream rng(47, 0, StreamPurpose::Design);
  const int n = 40, d = 10;
  Eigen::MatrixXd Z(n, d);
  rng.fill_normal(Z);
  Eigen::VectorXd beta_true = Eigen::VectorXd::Zero(d);
  beta_true[0] = 2.0;
  beta_true[3] = -1.5;
  Eigen::VectorXd noise(n);
  rng.fill_normal(noise);
  const Eigen::VectorXd y = Z * beta_true + 0.5 * noise;
  SolverConfig cfg;
  cfg.tol = 1e-12;
  std::vector<double> trace;
  lla_fit(Z, y, scad_spec(0.2), cfg, Eigen::VectorXd::Zero(d), &trace);
  REQUIRE(trace.size() >= 2);
  for (std::size_t k = 1; k < trace.size(); ++k)
    CHECK(trace[k] <= trace[k - 1] + 1e-10);
}

TEST_CASE("SCAD leaves a strong coefficient unpenalized") {
  const int n = 60;
  const Eigen::MatrixXd Z = orthonormal_design(n, 1, 91);
  const double lambda = 0.5;
  const double strong = 3.7 * lambda * 1.5;  // beyond a*lambda
  const Eigen::VectorXd y = Z * Eigen::VectorXd::Constant(1, strong);
  SolverConfig cfg;
  cfg.tol = 1e-14;
  const Eigen::VectorXd init = Eigen::VectorXd::Zero(1);
  const ModelEstimate est = lla_fit(Z, y, scad_spec(lambda), cfg, init);
  const double ols = Z.col(0).dot(y) / n;
  CHECK(std::abs(est.beta[0] - ols) <= 1e-8);
}

TEST_CASE("bic_select prefers sparse models on pure noise") {
  RngStream rng(53, 0, StreamPurpose::Design);
  const int n = 60, d = 10;
  Eigen::MatrixXd Z(n, d);
  rng.fill_normal(Z);
  Eigen::VectorXd y(n);
  rng.fill_normal(y);
  SolverConfig cfg;
  const auto [lambda, est] = bic_select(Z, y, scad_spec(0.0), cfg);
  CHECK(est.support.size() <= 2);
  // The returned lambda attains the minimum BIC over the grid (recompute
  // cold for every grid point).
  SolverConfig grid_cfg = cfg;
  grid_cfg.lambda_grid = default_lambda_grid(Z, y);
  double best = std::numeric_limits<double>::infinity();
  double best_lambda = 0.0;
  for (double l : grid_cfg.lambda_grid) {
    PenaltySpec s = scad_spec(l);
    const ModelEstimate e =
        lla_fit(Z, y, s, cfg, lla_default_init(Z, y));
    const double rss = (y - Z * e.beta).squaredNorm();
    const double bic = n * std::log(rss / n) +
                       static_cast<double>(e.support.size()) * std::log(n);
    if (bic < best) {
      best = bic;
      best_lambda = l;
    }
  }
  CHECK(lambda == doctest::Approx(best_lambda));
}

TEST_CASE("bic_select finds a single strong predictor in noiseless data") {
  RngStream rng(59, 0, StreamPurpose::Design);
  const int n = 50, d = 8;
  Eigen::MatrixXd Z(n, d);
  rng.fill_normal(Z);
  const Eigen::VectorXd y = 4.0 * Z.col(5);
  SolverConfig cfg;
  const auto [lambda, est] = bic_select(Z, y, scad_spec(0.0), cfg);
  (void)lambda;
  CHECK(est.support == IndexSet{5});
}

TEST_CASE("bic_select with a one-point grid returns that lambda") {
  RngStream rng(61, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(20, 3);
  rng.fill_normal(Z);
  Eigen::VectorXd y(20);
  rng.fill_normal(y);
  SolverConfig cfg;
  cfg.lambda_grid = {0.07};
  const auto [lambda, est] = bic_select(Z, y, scad_spec(0.0), cfg);
  (void)est;
  CHECK(lambda == doctest::Approx(0.07));
}

TEST_CASE("warm starts do not change the per-lambda solutions") {
  RngStream rng(67, 0, StreamPurpose::Design);
  const int n = 30, d = 6;
  Eigen::MatrixXd Z(n, d);
  rng.fill_normal(Z);
  Eigen::VectorXd noise(n);
  rng.fill_normal(noise);
  const Eigen::VectorXd y = 2.0 * Z.col(1) - Z.col(4) + 0.3 * noise;
  SolverConfig cfg;
  cfg.tol = 1e-10;
  const std::vector<double> grid = default_lambda_grid(Z, y, 12);
  Eigen::VectorXd warm = lla_default_init(Z, y);
  for (double lambda : grid) {
    const ModelEstimate warm_fit = lla_fit(Z, y, scad_spec(lambda), cfg, warm);
    warm = warm_fit.beta;
    const ModelEstimate cold_fit =
        lla_fit(Z, y, scad_spec(lambda), cfg, lla_default_init(Z, y));
    CHECK((warm_fit.beta - cold_fit.beta).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("adaptive lasso with gamma 0 is the plain lasso") {
  RngStream rng(71, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(25, 4);
  rng.fill_normal(Z);
  Eigen::VectorXd y(25);
  rng.fill_normal(y);
  SolverConfig cfg;
  const double lambda = 0.1;
  const ModelEstimate ada = adaptive_lasso_fit(
      Z, y, lambda, 0.0, Eigen::VectorXd::Ones(4), cfg);
  const ModelEstimate lasso =
      weighted_lasso_cd(Z, y, Eigen::VectorXd::Constant(4, lambda), cfg);
  CHECK((ada.beta - lasso.beta).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("zero base coefficients pin adaptive lasso coordinates") {
  RngStream rng(73, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(20, 3);
  rng.fill_normal(Z);
  const Eigen::VectorXd y = Z * Eigen::Vector3d(2.0, 2.0, 2.0);
  Eigen::VectorXd base(3);
  base << 1.0, 0.0, 1.0;
  SolverConfig cfg;
  const ModelEstimate est = adaptive_lasso_fit(Z, y, 0.05, 1.0, base, cfg);
  CHECK(est.beta[1] == 0.0);
}

TEST_CASE("adaptive lasso equals a direct weighted call") {
  RngStream rng(79, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(10, 4);
  rng.fill_normal(Z);
  Eigen::VectorXd y(10);
  rng.fill_normal(y);
  const Eigen::VectorXd base = ols_fit(Z, y);
  const double lambda = 0.07, gamma = 0.5;
  SolverConfig cfg;
  cfg.tol = 1e-11;
  const ModelEstimate ada = adaptive_lasso_fit(Z, y, lambda, gamma, base, cfg);
  Eigen::VectorXd w(4);
  for (int j = 0; j < 4; ++j)
    w[j] = lambda / std::pow(std::abs(base[j]), gamma);
  const ModelEstimate direct = weighted_lasso_cd(Z, y, w, cfg);
  CHECK((ada.beta - direct.beta).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("non-convergence is flagged, not fatal") {
  RngStream rng(83, 0, StreamPurpose::Design);
  Eigen::MatrixXd Z(40, 12);
  rng.fill_normal(Z);
  Eigen::VectorXd y(40);
  rng.fill_normal(y);
  SolverConfig cfg;
  cfg.max_inner = 1;
  cfg.tol = 1e-15;
  const ModelEstimate est =
      weighted_lasso_cd(Z, y, Eigen::VectorXd::Constant(12, 1e-4), cfg);
  CHECK_FALSE(est.converged);
  CHECK(est.beta.allFinite());
}
