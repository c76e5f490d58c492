#pragma once

#include <functional>
#include <map>
#include <string>

#include "sisreg/rng.hpp"
#include "sisreg/simgen.hpp"
#include "sisreg/types.hpp"

namespace sisreg {

struct DistributionReport {
  std::vector<double> sample;  // sorted ascending
  std::string reference;       // named reference law with parameters
  double ks_statistic = 0.0;   // 0 when no reference CDF applies
  int n_draws = 0;
  std::map<std::string, double> summary;  // medians and friends
};

/// Regularized incomplete beta function I_x(a, b).
double beta_cdf(double a, double b, double x);

/// Kolmogorov-Smirnov statistic of a sorted sample against a CDF.
double ks_statistic(const std::vector<double>& sorted_sample,
                    const std::function<double(double)>& cdf);

/// Draws the (1,1) entry of the projection onto the row space of an i.i.d.
/// Gaussian n x p matrix and compares it to Beta(n/2, (p-n)/2).
DistributionReport projection_diag_check(int n, int p, int n_draws,
                                         std::uint64_t seed);

/// Extreme eigenvalues of Z Z^T / p for gamma = p/n > 1; medians of the
/// square roots are reported against 1 +- gamma^{-1/2}.
DistributionReport eigen_concentration_check(int n, int p, int n_draws,
                                             std::uint64_t seed);

struct SpuriousCorrOptions {
  bool pairwise = false;          // max over sampled pairs instead
  std::uint64_t pair_cap = 1000000;  // sampled pairs per draw when pairwise
};

/// Per draw: i.i.d. Gaussian design, max |sample corr| of every other column
/// against column one (or over a sampled set of pairs).
DistributionReport max_spurious_corr(int n, int p, int n_draws,
                                     std::uint64_t seed,
                                     SpuriousCorrOptions opts = {});

/// Smallest d such that the marginal ranking's top d covers the true model
/// (the worst 1-based rank over the true variables).
int min_model_size_to_cover(const GeneratedInstance& inst);

}  // namespace sisreg
