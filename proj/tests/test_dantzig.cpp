#include <doctest.h>

#include <cmath>

#include "lp_oracle.hpp"
#include "sisreg/core.hpp"
#include "sisreg/dantzig.hpp"
#include "sisreg/rng.hpp"

using namespace sisreg;

namespace {

MatrixXd random_matrix(int n, int p, std::uint64_t seed) {
  RngStream rng(seed, 0, StreamPurpose::Design);
  MatrixXd X(n, p);
  rng.fill_normal(X);
  return X;
}

}  // namespace

TEST_CASE("one-constraint LP: min x subject to x >= 3") {
  LinearProgram lp;
  lp.c = VectorXd::Ones(1);
  lp.A_ub = MatrixXd::Constant(1, 1, -1.0);
  lp.b_ub = VectorXd::Constant(1, -3.0);
  const SimplexResult res = simplex_solve(lp, 1e-9, 100);
  CHECK(res.x[0] == doctest::Approx(3.0));
  CHECK(res.objective == doctest::Approx(3.0));
}

TEST_CASE("textbook LP: min -x-y subject to x+y <= 1") {
  LinearProgram lp;
  lp.c = VectorXd::Constant(2, -1.0);
  lp.A_ub = MatrixXd::Constant(1, 2, 1.0);
  lp.b_ub = VectorXd::Constant(1, 1.0);
  const SimplexResult res = simplex_solve(lp, 1e-9, 100);
  CHECK(res.objective == doctest::Approx(-1.0));
}

TEST_CASE("free variables are handled by splitting") {
  // min x with x free and x >= -5 as a row constraint: optimum -5.
  LinearProgram lp;
  lp.c = VectorXd::Ones(1);
  lp.A_ub = MatrixXd::Constant(1, 1, -1.0);
  lp.b_ub = VectorXd::Constant(1, 5.0);
  lp.free_var = {true};
  const SimplexResult res = simplex_solve(lp, 1e-9, 100);
  CHECK(res.x[0] == doctest::Approx(-5.0));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram bad;
  bad.c = VectorXd::Ones(1);
  bad.A_ub = MatrixXd::Constant(1, 1, 1.0);
  bad.b_ub = VectorXd::Constant(1, -1.0);  // x <= -1 with x >= 0
  CHECK_THROWS_AS(simplex_solve(bad, 1e-9, 100), Error);

  LinearProgram unb;
  unb.c = VectorXd::Constant(1, -1.0);
  unb.A_ub = MatrixXd::Zero(1, 1);
  unb.b_ub = VectorXd::Ones(1);
  CHECK_THROWS_AS(simplex_solve(unb, 1e-9, 100), Error);
}

TEST_CASE("pivot limit is reported") {
  LinearProgram lp;
  lp.c = VectorXd::Constant(2, -1.0);
  lp.A_ub = MatrixXd::Identity(2, 2);
  lp.b_ub = VectorXd::Ones(2);
  CHECK_THROWS_AS(simplex_solve(lp, 1e-9, 1), Error);
}

TEST_CASE("dantzig LP shape: d = 1 gives 3 variables and 4 rows") {
  MatrixXd Z = random_matrix(10, 1, 5);
  VectorXd y = random_matrix(10, 1, 6).col(0);
  DantzigConfig cfg;
  cfg.lambda_d = 1.0;
  const LinearProgram lp = build_dantzig_lp(Z, y, cfg);
  CHECK(lp.c.size() == 3);
  CHECK(lp.A_ub.rows() == 4);
  CHECK(lp.A_ub.cols() == 3);
}

TEST_CASE("correlation rows carry the +-Z^T Z blocks") {
  const MatrixXd Z = random_matrix(3, 2, 7);
  const VectorXd y = random_matrix(3, 1, 8).col(0);
  DantzigConfig cfg;
  cfg.lambda_d = 0.5;
  const LinearProgram lp = build_dantzig_lp(Z, y, cfg);
  const MatrixXd G = Z.transpose() * Z;
  CHECK((lp.A_ub.block(4, 2, 2, 2) + G).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((lp.A_ub.block(4, 4, 2, 2) - G).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((lp.A_ub.block(6, 2, 2, 2) - G).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((lp.A_ub.block(6, 4, 2, 2) + G).cwiseAbs().maxCoeff() <= 1e-14);
  // Split-bound rows touch only (u, zeta+, zeta-) for their coordinate.
  CHECK(lp.A_ub(0, 0) == -1.0);
  CHECK(lp.A_ub(0, 2) == 1.0);
  CHECK(lp.A_ub(0, 4) == -1.0);
}

TEST_CASE("a slack bound makes the origin optimal") {
  const MatrixXd Z = random_matrix(12, 3, 11);
  const VectorXd y = random_matrix(12, 1, 12).col(0);
  DantzigConfig cfg;
  cfg.sigma = 1.0;
  cfg.lambda_d = (Z.transpose() * y).cwiseAbs().maxCoeff() * 1.01;
  const ModelEstimate est = dantzig_select(Z, y, cfg);
  CHECK(est.beta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(est.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("y = 0 gives the zero solution") {
  const MatrixXd Z = random_matrix(8, 3, 13);
  DantzigConfig cfg;
  const ModelEstimate est = dantzig_select(Z, VectorXd::Zero(8), cfg);
  CHECK(est.beta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lambda 0 pins the solution to least squares") {
  const MatrixXd Z = random_matrix(15, 4, 17);
  RngStream rng(18, 0, StreamPurpose::Generic);
  VectorXd y(15);
  rng.fill_normal(y);
  DantzigConfig cfg;
  cfg.lambda_d = 0.0;
  const ModelEstimate est = dantzig_select(Z, y, cfg);
  const VectorXd ols = ols_fit(Z, y);
  CHECK((est.beta - ols).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("dantzig objective matches exhaustive vertex enumeration") {
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed, 9, StreamPurpose::Design);
    const int n = 8, d = 2;
    MatrixXd Z(n, d);
    rng.fill_normal(Z);
    VectorXd beta_true = VectorXd::Zero(d);
    beta_true[0] = 1.5;
    VectorXd noise(n);
    rng.fill_normal(noise);
    const VectorXd y = Z * beta_true + 0.2 * noise;
    DantzigConfig cfg;
    cfg.lambda_d = 1.0;
    cfg.sigma = 0.5 + rng.next_uniform();
    const LinearProgram lp = build_dantzig_lp(Z, y, cfg);
    const auto oracle = test::enumerate_lp_optimum(lp);
    REQUIRE(oracle.has_value());
    const ModelEstimate est = dantzig_select(Z, y, cfg);
    CHECK(est.objective == doctest::Approx(*oracle).epsilon(1e-6));
    ++solved;
  }
  CHECK(solved == 20);
}

TEST_CASE("solutions are l1-minimal against feasible competitors") {
  RngStream rng(23, 0, StreamPurpose::Design);
  const int n = 10, d = 4;
  MatrixXd Z(n, d);
  rng.fill_normal(Z);
  VectorXd beta_true(d);
  beta_true << 2.0, 0.0, -1.0, 0.0;
  VectorXd noise(n);
  rng.fill_normal(noise);
  const VectorXd y = Z * beta_true + 0.3 * noise;
  DantzigConfig cfg;
  cfg.lambda_d = 1.2;
  const ModelEstimate est = dantzig_select(Z, y, cfg);
  const double bound = cfg.resolved_lambda(d) * cfg.sigma;

  // The least-squares point is always feasible; blend it with random
  // perturbations and keep the feasible ones as competitors.
  const VectorXd ols = ols_fit(Z, y);
  int tested = 0;
  for (int k = 0; k < 200; ++k) {
    VectorXd cand = ols;
    for (int j = 0; j < d; ++j)
      cand[j] += 0.5 * (rng.next_uniform() - 0.5);
    const double resid =
        (Z.transpose() * (y - Z * cand)).cwiseAbs().maxCoeff();
    if (resid <= bound) {
      ++tested;
      CHECK(est.beta.cwiseAbs().sum() <=
            cand.cwiseAbs().sum() + 1e-8);
    }
  }
  CHECK(tested > 10);
}

TEST_CASE("scaling y and sigma together scales the solution") {
  RngStream rng(29, 0, StreamPurpose::Design);
  const int n = 12, d = 3;
  MatrixXd Z(n, d);
  rng.fill_normal(Z);
  VectorXd y(n);
  rng.fill_normal(y);
  y += Z * Eigen::Vector3d(1.0, -2.0, 0.0);
  DantzigConfig cfg;
  cfg.lambda_d = 1.0;
  cfg.sigma = 0.8;
  const ModelEstimate base = dantzig_select(Z, y, cfg);
  const double c = 3.5;
  DantzigConfig scaled = cfg;
  scaled.sigma = cfg.sigma * c;
  const ModelEstimate big = dantzig_select(Z, c * y, scaled);
  CHECK((big.beta - c * base.beta).cwiseAbs().maxCoeff() <=
        1e-8 * std::max(1.0, c * base.beta.cwiseAbs().maxCoeff()));
}

TEST_CASE("simplex is deterministic") {
  const MatrixXd Z = random_matrix(10, 3, 31);
  RngStream rng(32, 0, StreamPurpose::Generic);
  VectorXd y(10);
  rng.fill_normal(y);
  DantzigConfig cfg;
  const LinearProgram lp = build_dantzig_lp(Z, y, cfg);
  const SimplexResult a = simplex_solve(lp, cfg.lp_tol, cfg.max_pivots);
  const SimplexResult b = simplex_solve(lp, cfg.lp_tol, cfg.max_pivots);
  CHECK(a.pivots == b.pivots);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hard_threshold_topk ordering and ties") {
  ModelEstimate est =
      ModelEstimate::from_beta(Eigen::Vector3d(3.0, -5.0, 1.0), 0, 0);
  CHECK(hard_threshold_topk(est, 2) == IndexSet{0, 1});
  CHECK(hard_threshold_topk(est, 3) == IndexSet{0, 1, 2});
  ModelEstimate zero =
      ModelEstimate::from_beta(Eigen::Vector3d(0.0, 0.0, 0.0), 0, 0);
  CHECK(hard_threshold_topk(zero, 2) == IndexSet{0, 1});
  CHECK_THROWS_AS(hard_threshold_topk(est, 4), Error);
}

TEST_CASE("dantzig residual satisfies the correlation constraint") {
  const MatrixXd Z = random_matrix(20, 6, 37);
  RngStream rng(38, 0, StreamPurpose::Generic);
  VectorXd y(20);
  rng.fill_normal(y);
  y += Z.col(0) * 3.0;
  DantzigConfig cfg;
  const ModelEstimate est = dantzig_select(Z, y, cfg);
  const double bound = cfg.resolved_lambda(6) * cfg.sigma;
  CHECK((Z.transpose() * (y - Z * est.beta)).cwiseAbs().maxCoeff() <=
        bound + 1e-8);
}
