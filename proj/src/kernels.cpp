#include "sisreg/kernels.hpp"

#include <cmath>

namespace sisreg::kernels {

namespace {

inline double dot_col(const MatrixXd& Z, int j, const VectorXd& v) {
  const double* col = Z.col(j).data();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < Z.rows(); ++i) acc += col[i] * v[i];
  return acc;
}

inline void moments_col(const MatrixXd& X, int j, int ddof, double& mean,
                        double& sd) {
  const double* col = X.col(j).data();
  const Eigen::Index n = X.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) acc += col[i];
  mean = acc / static_cast<double>(n);
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = col[i] - mean;
    ss += c * c;
  }
  sd = std::sqrt(ss / static_cast<double>(n - ddof));
}

inline double abs_corr_col(const MatrixXd& X, int j, int ref, double mean_ref,
                           double ss_ref) {
  const double* a = X.col(j).data();
  const double* b = X.col(ref).data();
  const Eigen::Index n = X.rows();
  double mean_a = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mean_a += a[i];
  mean_a /= static_cast<double>(n);
  double ss_a = 0.0, cross = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ca = a[i] - mean_a;
    ss_a += ca * ca;
    cross += ca * (b[i] - mean_ref);
  }
  const double denom = std::sqrt(ss_a * ss_ref);
  return denom > 0.0 ? std::abs(cross) / denom : 0.0;
}

}  // namespace

void col_dots_serial(const MatrixXd& Z, const VectorXd& v, VectorXd& out) {
  out.resize(Z.cols());
  for (int j = 0; j < Z.cols(); ++j) out[j] = dot_col(Z, j, v);
}

void col_dots(const MatrixXd& Z, const VectorXd& v, VectorXd& out) {
  out.resize(Z.cols());
  const int p = static_cast<int>(Z.cols());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p; ++j) out[j] = dot_col(Z, j, v);
}

void col_moments_serial(const MatrixXd& X, VectorXd& mean, VectorXd& sd,
                        int ddof) {
  mean.resize(X.cols());
  sd.resize(X.cols());
  for (int j = 0; j < X.cols(); ++j) moments_col(X, j, ddof, mean[j], sd[j]);
}

void col_moments(const MatrixXd& X, VectorXd& mean, VectorXd& sd, int ddof) {
  mean.resize(X.cols());
  sd.resize(X.cols());
  const int p = static_cast<int>(X.cols());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p; ++j) moments_col(X, j, ddof, mean[j], sd[j]);
}

double max_abs_corr_vs_serial(const MatrixXd& X, int ref) {
  const Eigen::Index n = X.rows();
  double mean_ref = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mean_ref += X(i, ref);
  mean_ref /= static_cast<double>(n);
  double ss_ref = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = X(i, ref) - mean_ref;
    ss_ref += c * c;
  }
  double best = 0.0;
  for (int j = 0; j < X.cols(); ++j) {
    if (j == ref) continue;
    best = std::max(best, abs_corr_col(X, j, ref, mean_ref, ss_ref));
  }
  return best;
}

double max_abs_corr_vs(const MatrixXd& X, int ref) {
  const Eigen::Index n = X.rows();
  double mean_ref = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mean_ref += X(i, ref);
  mean_ref /= static_cast<double>(n);
  double ss_ref = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = X(i, ref) - mean_ref;
    ss_ref += c * c;
  }
  const int p = static_cast<int>(X.cols());
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (int j = 0; j < p; ++j) {
    if (j == ref) continue;
    const double v = abs_corr_col(X, j, ref, mean_ref, ss_ref);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace sisreg::kernels
