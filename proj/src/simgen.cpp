#include "sisreg/simgen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace sisreg {

void SimulationSpec::validate() const {
  require(p >= 1, ErrorCode::BadSpec, "simulation spec needs p >= 1");
  require(sigma >= 0.0, ErrorCode::BadSpec, "sigma must be nonnegative");
  switch (design) {
    case Design::SIM1:
      require(n >= 2 && s >= 1 && s <= p, ErrorCode::BadSpec,
              "SIM1 needs n >= 2 and 1 <= s <= p");
      break;
    case Design::SIM2:
      require(n >= 2 && s >= 1 && 2 * s < p, ErrorCode::BadSpec,
              "SIM2 needs n >= 2 and 2s < p");
      break;
    case Design::EX1:
      require(n >= 2 && p >= 3 && rho >= 0.0 && rho < 1.0, ErrorCode::BadSpec,
              "EX1 needs p >= 3 and rho in [0,1)");
      break;
    case Design::EX2:
      require(n >= 2 && p >= 4 && rho < 1.0, ErrorCode::BadSpec,
              "EX2 needs p >= 4 and rho < 1");
      require(rho > 0.0, ErrorCode::BadRho, "EX2 needs rho > 0");
      break;
    case Design::EX3:
      require(n >= 2 && p >= 5 && rho < 1.0, ErrorCode::BadSpec,
              "EX3 needs p >= 5 and rho < 1");
      require(rho > 0.0, ErrorCode::BadRho, "EX3 needs rho > 0");
      break;
    case Design::TWOCLASS:
      require(n1 >= 2 && n2 >= 2, ErrorCode::BadSpec,
              "TWOCLASS needs n1, n2 >= 2");
      require(n_informative >= 0 && n_informative <= p, ErrorCode::BadSpec,
              "TWOCLASS informative count out of range");
      break;
    case Design::IID_CORR:
      require(n >= 2 && p >= 2, ErrorCode::BadSpec,
              "IID_CORR needs n, p >= 2");
      break;
  }
}

double coef_floor(int n, double mult) {
  return mult * std::log(static_cast<double>(n)) /
         std::sqrt(static_cast<double>(n));
}

VectorXd gen_coefficients(int p, int s, double a_coef, RngStream& positions,
                          RngStream& values) {
  require(s >= 1 && s <= p, ErrorCode::BadSpec,
          "gen_coefficients needs 1 <= s <= p");
  // Partial Fisher-Yates for s positions without replacement.
  std::vector<int> pool(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) pool[static_cast<std::size_t>(j)] = j;
  VectorXd beta = VectorXd::Zero(p);
  for (int k = 0; k < s; ++k) {
    const auto pick = static_cast<std::size_t>(
        positions.next_below(static_cast<std::uint64_t>(p - k)));
    std::swap(pool[static_cast<std::size_t>(k)],
              pool[static_cast<std::size_t>(k) + pick]);
    const double u = values.next_uniform() < 0.4 ? -1.0 : 1.0;
    const double z = values.next_normal();
    beta[pool[static_cast<std::size_t>(k)]] = u * (a_coef + std::abs(z));
  }
  return beta;
}

namespace {

GeneratedInstance finish_regression_instance(const SimulationSpec& spec,
                                             MatrixXd X, VectorXd beta,
                                             std::uint64_t replicate) {
  RngStream noise(spec.seed, replicate, StreamPurpose::Noise);
  VectorXd eps(X.rows());
  noise.fill_normal(eps);
  VectorXd y = X * beta + spec.sigma * eps;
  GeneratedInstance inst{Dataset(std::move(y), std::move(X)),
                         GroundTruth::from_beta(std::move(beta), spec.sigma),
                         spec.sigma, spec};
  return inst;
}

}  // namespace

GeneratedInstance gen_sim1(const SimulationSpec& spec,
                           std::uint64_t replicate) {
  spec.validate();
  require(spec.design == Design::SIM1, ErrorCode::BadSpec, "not a SIM1 spec");
  const double a =
      spec.a_coef > 0.0 ? spec.a_coef : coef_floor(spec.n, 4.0);
  RngStream pos(spec.seed, replicate, StreamPurpose::Positions);
  RngStream coef(spec.seed, replicate, StreamPurpose::Coefficients);
  VectorXd beta = gen_coefficients(spec.p, spec.s, a, pos, coef);

  RngStream design(spec.seed, replicate, StreamPurpose::Design);
  MatrixXd X(spec.n, spec.p);
  design.fill_normal(X);
  SimulationSpec echo = spec;
  echo.a_coef = a;
  return finish_regression_instance(echo, std::move(X), std::move(beta),
                                    replicate);
}

MatrixXd random_spd_with_condition(int s, double cond, RngStream& rng) {
  require(s >= 1 && cond >= 1.0, ErrorCode::BadSpec,
          "SPD generator needs s >= 1 and cond >= 1");
  MatrixXd G(s, s);
  rng.fill_normal(G);
  Eigen::HouseholderQR<MatrixXd> qr(G);
  MatrixXd Q = qr.householderQ();
  // Fix the sign convention so the draw is unambiguous.
  const MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < s; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  VectorXd eig(s);
  for (int j = 0; j < s; ++j) {
    const double f =
        s == 1 ? 0.0
               : static_cast<double>(j) / static_cast<double>(s - 1);
    eig[j] = std::exp(f * std::log(cond));
  }
  return Q * eig.asDiagonal() * Q.transpose();
}

GeneratedInstance gen_sim2(const SimulationSpec& spec,
                           std::uint64_t replicate) {
  spec.validate();
  require(spec.design == Design::SIM2, ErrorCode::BadSpec, "not a SIM2 spec");
  const int n = spec.n, p = spec.p, s = spec.s;
  const double a =
      spec.a_coef > 0.0 ? spec.a_coef : coef_floor(n, 4.0);
  const double cond =
      spec.cond > 0.0
          ? spec.cond
          : std::sqrt(static_cast<double>(n)) / std::log(static_cast<double>(n));
  const double r =
      spec.r >= 0.0
          ? spec.r
          : 1.0 - 4.0 * std::log(static_cast<double>(n)) /
                      static_cast<double>(p);

  RngStream pos(spec.seed, replicate, StreamPurpose::Positions);
  RngStream coef(spec.seed, replicate, StreamPurpose::Coefficients);
  VectorXd beta = gen_coefficients(p, s, a, pos, coef);

  RngStream spd(spec.seed, replicate, StreamPurpose::SpdMatrix);
  const MatrixXd A = random_spd_with_condition(s, cond, spd);
  const MatrixXd L = Eigen::LLT<MatrixXd>(A).matrixL();

  RngStream design(spec.seed, replicate, StreamPurpose::Design);
  MatrixXd X(n, p);
  {
    MatrixXd G(n, s);
    design.fill_normal(G);
    X.leftCols(s) = G * L.transpose();
  }
  MatrixXd Zrest(n, p - s);
  design.fill_normal(Zrest);
  for (int i = s; i < 2 * s; ++i)
    X.col(i) = Zrest.col(i - s) + r * X.col(i - s);
  for (int i = 2 * s; i < p; ++i)
    X.col(i) = Zrest.col(i - s) + (1.0 - r) * X.col(0);

  SimulationSpec echo = spec;
  echo.a_coef = a;
  echo.cond = cond;
  echo.r = r;
  return finish_regression_instance(echo, std::move(X), std::move(beta),
                                    replicate);
}

GeneratedInstance gen_example(const SimulationSpec& spec,
                              std::uint64_t replicate) {
  spec.validate();
  require(spec.design == Design::EX1 || spec.design == Design::EX2 ||
              spec.design == Design::EX3,
          ErrorCode::BadSpec, "not an EX1/EX2/EX3 spec");
  const int n = spec.n, p = spec.p;
  const double rho = spec.rho;
  const double sr = std::sqrt(rho);

  VectorXd beta = VectorXd::Zero(p);
  beta[0] = beta[1] = beta[2] = 5.0;
  if (spec.design != Design::EX1) beta[3] = -15.0 * sr;
  if (spec.design == Design::EX3) beta[4] = 1.0;

  // Common-factor representation: X_j = sqrt(rho) F + sqrt(1-rho) e_j for
  // the equicorrelated block, X_4 = F itself (corr sqrt(rho) with the rest),
  // X_5 a fresh independent normal in EX3.
  const int factor_col = spec.design == Design::EX1 ? -1 : 3;
  const int indep_col = spec.design == Design::EX3 ? 4 : -1;

  if (factor_col >= 0) {
    // Closed-form population moments of the construction; the contract is
    // cov(X_4, Y) = 0 and corr(X_4, X_j) = sqrt(rho).
    double cov_x4_y = 0.0;
    for (int j = 0; j < p; ++j) {
      if (beta[j] == 0.0) continue;
      double cov_x4_xj;
      if (j == factor_col)
        cov_x4_xj = 1.0;
      else if (j == indep_col)
        cov_x4_xj = 0.0;
      else
        cov_x4_xj = sr;
      cov_x4_y += beta[j] * cov_x4_xj;
    }
    require(std::abs(cov_x4_y) <= 1e-12, ErrorCode::BadSpec,
            "EX design: population cov(X4, Y) must vanish");
  }

  RngStream design(spec.seed, replicate, StreamPurpose::Design);
  RngStream factor(spec.seed, replicate, StreamPurpose::Factor);
  MatrixXd X(n, p);
  VectorXd F(n);
  factor.fill_normal(F);
  const double load = std::sqrt(1.0 - rho);
  MatrixXd E(n, p);
  design.fill_normal(E);
  for (int j = 0; j < p; ++j) {
    if (j == factor_col)
      X.col(j) = F;
    else if (j == indep_col)
      X.col(j) = E.col(j);
    else
      X.col(j) = sr * F + load * E.col(j);
  }
  SimulationSpec echo = spec;
  echo.s = spec.design == Design::EX1 ? 3 : (spec.design == Design::EX2 ? 4 : 5);
  return finish_regression_instance(echo, std::move(X), std::move(beta),
                                    replicate);
}

Dataset gen_iid_corr(int n, int p, RngStream& rng) {
  require(n >= 2 && p >= 2, ErrorCode::BadSpec, "gen_iid_corr needs n,p >= 2");
  MatrixXd X(n, p);
  rng.fill_normal(X);
  return Dataset(VectorXd::Zero(n), std::move(X));
}

Dataset gen_twoclass(int n1, int n2, int p, const IndexSet& informative,
                     double gap, RngStream& rng) {
  require(n1 >= 2 && n2 >= 2, ErrorCode::BadSpec,
          "gen_twoclass needs n1, n2 >= 2");
  const int n = n1 + n2;
  MatrixXd X(n, p);
  rng.fill_normal(X);
  for (int j : informative) {
    require(j >= 0 && j < p, ErrorCode::BadSpec,
            "informative index out of range");
    X.col(j).head(n1).array() += gap;
  }
  VectorXd labels(n);
  labels.head(n1).setOnes();
  labels.tail(n2).setConstant(-1.0);
  return Dataset(std::move(labels), std::move(X));
}

GeneratedInstance gen_twoclass_instance(const SimulationSpec& spec,
                                        std::uint64_t replicate) {
  spec.validate();
  require(spec.design == Design::TWOCLASS, ErrorCode::BadSpec,
          "not a TWOCLASS spec");
  RngStream rng(spec.seed, replicate, StreamPurpose::Design);
  IndexSet informative;
  for (int j = 0; j < spec.n_informative; ++j) informative.push_back(j);
  Dataset data =
      gen_twoclass(spec.n1, spec.n2, spec.p, informative, spec.gap, rng);
  VectorXd shift = VectorXd::Zero(spec.p);
  for (int j : informative) shift[j] = spec.gap;
  GeneratedInstance inst{std::move(data),
                         GroundTruth::from_beta(std::move(shift), 1.0), 1.0,
                         spec};
  return inst;
}

GeneratedInstance generate_instance(const SimulationSpec& spec,
                                    std::uint64_t replicate) {
  switch (spec.design) {
    case Design::SIM1:
      return gen_sim1(spec, replicate);
    case Design::SIM2:
      return gen_sim2(spec, replicate);
    case Design::EX1:
    case Design::EX2:
    case Design::EX3:
      return gen_example(spec, replicate);
    case Design::TWOCLASS:
      return gen_twoclass_instance(spec, replicate);
    case Design::IID_CORR: {
      SimulationSpec s2 = spec;
      s2.validate();
      RngStream rng(spec.seed, replicate, StreamPurpose::Design);
      Dataset d = gen_iid_corr(spec.n, spec.p, rng);
      GeneratedInstance inst{std::move(d),
                             GroundTruth::from_beta(VectorXd::Zero(spec.p), 0.0),
                             0.0, spec};
      return inst;
    }
  }
  fail(ErrorCode::BadSpec, "unknown design");
}

}  // namespace sisreg
