#include "sisreg/theory.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sisreg/core.hpp"
#include "sisreg/kernels.hpp"
#include "sisreg/screening.hpp"

namespace sisreg {

namespace {

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cont_frac(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double median_of_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double beta_cdf(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, ErrorCode::BadSpec,
          "beta_cdf needs positive parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cont_frac(a, b, x) / a;
  return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double ks_statistic(const std::vector<double>& sorted_sample,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_sample.size();
  require(n > 0, ErrorCode::BadSize, "KS needs a nonempty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_sample[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    d = std::max(d, std::max(std::abs(hi - f), std::abs(f - lo)));
  }
  return d;
}

DistributionReport projection_diag_check(int n, int p, int n_draws,
                                         std::uint64_t seed) {
  require(p > n && n >= 1, ErrorCode::BadSpec,
          "projection check needs p > n >= 1");
  require(n_draws >= 1, ErrorCode::BadSize, "need at least one draw");
  DistributionReport rep;
  rep.sample.resize(static_cast<std::size_t>(n_draws));
  int redraws = 0;

#pragma omp parallel for schedule(static) reduction(+ : redraws)
  for (int k = 0; k < n_draws; ++k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k),
                  StreamPurpose::Design);
    double value = 0.0;
    while (true) {
      MatrixXd Z(n, p);
      rng.fill_normal(Z);
      const MatrixXd K = Z * Z.transpose();
      Eigen::LLT<MatrixXd> llt(K);
      if (llt.info() != Eigen::Success) {
        ++redraws;
        continue;
      }
      // (1,1) entry of Z^T (Z Z^T)^-1 Z.
      const VectorXd z1 = Z.col(0);
      value = z1.dot(llt.solve(z1));
      break;
    }
    rep.sample[static_cast<std::size_t>(k)] = value;
  }
  std::sort(rep.sample.begin(), rep.sample.end());
  const double a = n / 2.0, b = (p - n) / 2.0;
  rep.reference = "Beta(" + std::to_string(a) + "," + std::to_string(b) + ")";
  rep.ks_statistic =
      ks_statistic(rep.sample, [&](double x) { return beta_cdf(a, b, x); });
  rep.n_draws = n_draws;
  rep.summary["mean"] =
      std::accumulate(rep.sample.begin(), rep.sample.end(), 0.0) / n_draws;
  rep.summary["median"] = median_of_sorted(rep.sample);
  rep.summary["redraws"] = redraws;
  return rep;
}

DistributionReport eigen_concentration_check(int n, int p, int n_draws,
                                             std::uint64_t seed) {
  require(p > n && n >= 1, ErrorCode::BadSpec,
          "eigenvalue check needs p > n >= 1");
  require(n_draws >= 1, ErrorCode::BadSize, "need at least one draw");
  std::vector<double> sqrt_max(static_cast<std::size_t>(n_draws));
  std::vector<double> sqrt_min(static_cast<std::size_t>(n_draws));

#pragma omp parallel for schedule(static)
  for (int k = 0; k < n_draws; ++k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k),
                  StreamPurpose::Design);
    MatrixXd Z(n, p);
    rng.fill_normal(Z);
    const MatrixXd K = (Z * Z.transpose()) / static_cast<double>(p);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(K,
                                                Eigen::EigenvaluesOnly);
    const VectorXd ev = eig.eigenvalues();
    sqrt_max[static_cast<std::size_t>(k)] =
        std::sqrt(std::max(ev.maxCoeff(), 0.0));
    sqrt_min[static_cast<std::size_t>(k)] =
        std::sqrt(std::max(ev.minCoeff(), 0.0));
  }
  std::sort(sqrt_max.begin(), sqrt_max.end());
  std::sort(sqrt_min.begin(), sqrt_min.end());

  const double gamma = static_cast<double>(p) / n;
  DistributionReport rep;
  rep.sample = sqrt_max;
  rep.reference = "sqrt-extreme-eigenvalue limits 1 +- gamma^{-1/2}, gamma=" +
                  std::to_string(gamma);
  rep.ks_statistic = 0.0;
  rep.n_draws = n_draws;
  rep.summary["median_sqrt_lambda_max"] = median_of_sorted(sqrt_max);
  rep.summary["median_sqrt_lambda_min"] = median_of_sorted(sqrt_min);
  rep.summary["limit_max"] = 1.0 + 1.0 / std::sqrt(gamma);
  rep.summary["limit_min"] = 1.0 - 1.0 / std::sqrt(gamma);
  return rep;
}

DistributionReport max_spurious_corr(int n, int p, int n_draws,
                                     std::uint64_t seed,
                                     SpuriousCorrOptions opts) {
  require(p >= 2 && n >= 2, ErrorCode::BadSpec,
          "spurious correlation check needs n, p >= 2");
  require(n_draws >= 1, ErrorCode::BadSize, "need at least one draw");
  DistributionReport rep;
  rep.sample.resize(static_cast<std::size_t>(n_draws));

#pragma omp parallel for schedule(static)
  for (int k = 0; k < n_draws; ++k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k),
                  StreamPurpose::Design);
    const Dataset d = gen_iid_corr(n, p, rng);
    if (!opts.pairwise) {
      rep.sample[static_cast<std::size_t>(k)] =
          kernels::max_abs_corr_vs(d.X, 0);
    } else {
      // Sampled pairs, capped for tractability at large p.
      const std::uint64_t total =
          static_cast<std::uint64_t>(p) * (p - 1) / 2;
      RngStream pair_rng(seed, static_cast<std::uint64_t>(k),
                         StreamPurpose::Generic);
      const std::uint64_t n_pairs = std::min(total, opts.pair_cap);
      const bool exhaustive = total <= opts.pair_cap;
      VectorXd mean, sd;
      kernels::col_moments(d.X, mean, sd, 1);
      auto corr = [&](int a, int b) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
          acc += (d.X(i, a) - mean[a]) * (d.X(i, b) - mean[b]);
        const double denom = sd[a] * sd[b] * (n - 1);
        return denom > 0.0 ? std::abs(acc) / denom : 0.0;
      };
      double best = 0.0;
      if (exhaustive) {
        for (int a = 0; a < p; ++a)
          for (int b = a + 1; b < p; ++b) best = std::max(best, corr(a, b));
      } else {
        for (std::uint64_t t = 0; t < n_pairs; ++t) {
          const int a = static_cast<int>(pair_rng.next_below(p));
          int b = static_cast<int>(pair_rng.next_below(p - 1));
          if (b >= a) ++b;
          best = std::max(best, corr(a, b));
        }
      }
      rep.sample[static_cast<std::size_t>(k)] = best;
    }
  }
  std::sort(rep.sample.begin(), rep.sample.end());
  rep.reference = opts.pairwise ? "max |corr| over predictor pairs"
                                : "max |corr| against a designated column";
  rep.n_draws = n_draws;
  rep.summary["median"] = median_of_sorted(rep.sample);
  rep.summary["extreme_value_scale"] =
      std::sqrt(2.0 * std::log(static_cast<double>(p)) / n);
  return rep;
}

int min_model_size_to_cover(const GeneratedInstance& inst) {
  require(!inst.truth.true_model.empty(), ErrorCode::BadSpec,
          "min_model_size_to_cover needs a nonempty true model");
  const StandardizedDesign sd = standardize(inst.data);
  const ScreeningResult scr = sis_rank(sd);
  std::vector<int> position(static_cast<std::size_t>(sd.p()), 0);
  for (std::size_t r = 0; r < scr.ranking.size(); ++r)
    position[static_cast<std::size_t>(scr.ranking[r])] =
        static_cast<int>(r) + 1;
  int worst = 0;
  for (int j : inst.truth.true_model)
    worst = std::max(worst, position[static_cast<std::size_t>(j)]);
  return worst;
}

}  // namespace sisreg
