#include "sisreg/types.hpp"

#include <algorithm>
#include <cmath>

namespace sisreg {

Dataset::Dataset(VectorXd y_in, MatrixXd X_in, std::vector<std::string> names)
    : y(std::move(y_in)), X(std::move(X_in)), feature_names(std::move(names)) {
  require(X.rows() >= 2 && y.size() == X.rows(), ErrorCode::BadInput,
          "dataset needs n >= 2 rows and matching y length");
  require(X.cols() >= 1, ErrorCode::BadInput, "dataset needs p >= 1 columns");
  require(y.allFinite() && X.allFinite(), ErrorCode::BadInput,
          "dataset contains non-finite entries");
  require(feature_names.empty() ||
              static_cast<Eigen::Index>(feature_names.size()) == X.cols(),
          ErrorCode::BadInput, "feature_names length must match p");
}

ModelEstimate ModelEstimate::from_beta(VectorXd beta, double objective,
                                       int iterations, bool converged) {
  require(std::isfinite(objective), ErrorCode::BadInput,
          "estimate objective must be finite");
  ModelEstimate est;
  est.beta = std::move(beta);
  for (int j = 0; j < est.beta.size(); ++j)
    if (est.beta[j] != 0.0) est.support.push_back(j);
  est.objective = objective;
  est.iterations = iterations;
  est.converged = converged;
  return est;
}

GroundTruth GroundTruth::from_beta(VectorXd beta_true, double sigma) {
  GroundTruth gt;
  gt.beta_true = std::move(beta_true);
  for (int j = 0; j < gt.beta_true.size(); ++j)
    if (gt.beta_true[j] != 0.0) gt.true_model.push_back(j);
  gt.s = static_cast<int>(gt.true_model.size());
  gt.sigma = sigma;
  return gt;
}

ScreeningResult ScreeningResult::from_omega(VectorXd omega, int d) {
  const int p = static_cast<int>(omega.size());
  require(d >= 1 && d <= p, ErrorCode::BadSize,
          "screening size d must be in [1, p]");
  ScreeningResult res;
  res.omega = std::move(omega);
  res.ranking.resize(p);
  for (int j = 0; j < p; ++j) res.ranking[j] = j;
  std::sort(res.ranking.begin(), res.ranking.end(), [&](int a, int b) {
    const double va = std::abs(res.omega[a]), vb = std::abs(res.omega[b]);
    if (va != vb) return va > vb;
    return a < b;
  });
  res.selected.assign(res.ranking.begin(), res.ranking.begin() + d);
  std::sort(res.selected.begin(), res.selected.end());
  res.d = d;
  return res;
}

}  // namespace sisreg
