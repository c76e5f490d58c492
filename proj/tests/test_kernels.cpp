#include <doctest.h>

#include "sisreg/kernels.hpp"
#include "sisreg/rng.hpp"

using namespace sisreg;

namespace {

Eigen::MatrixXd random_matrix(int n, int p, std::uint64_t seed) {
  RngStream rng(seed, 0, StreamPurpose::Design);
  Eigen::MatrixXd X(n, p);
  rng.fill_normal(X);
  return X;
}

}  // namespace

TEST_CASE("col_dots matches the serial reference bit for bit") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto Z = random_matrix(23, 57, seed);
    RngStream rng(seed, 1, StreamPurpose::Generic);
    Eigen::VectorXd v(23);
    rng.fill_normal(v);
    Eigen::VectorXd a, b;
    kernels::col_dots_serial(Z, v, a);
    kernels::col_dots(Z, v, b);
    REQUIRE(a.size() == b.size());
    for (int j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
  }
}

TEST_CASE("col_moments matches the serial reference bit for bit") {
  const auto X = random_matrix(41, 13, 9);
  for (int ddof : {0, 1}) {
    Eigen::VectorXd m1, s1, m2, s2;
    kernels::col_moments_serial(X, m1, s1, ddof);
    kernels::col_moments(X, m2, s2, ddof);
    for (int j = 0; j < 13; ++j) {
      CHECK(m1[j] == m2[j]);
      CHECK(s1[j] == s2[j]);
    }
  }
}

TEST_CASE("col_moments hand example") {
  Eigen::MatrixXd X(3, 1);
  X << 1, 2, 3;
  Eigen::VectorXd m, s;
  kernels::col_moments(X, m, s, 1);
  CHECK(m[0] == doctest::Approx(2.0));
  CHECK(s[0] == doctest::Approx(1.0));  // n-1 denominator
  kernels::col_moments(X, m, s, 0);
  CHECK(s[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("max_abs_corr_vs agrees with serial and a direct evaluation") {
  const auto X = random_matrix(30, 40, 17);
  const double a = kernels::max_abs_corr_vs_serial(X, 0);
  const double b = kernels::max_abs_corr_vs(X, 0);
  CHECK(a == b);

  double direct = 0.0;
  const auto c0 = X.col(0).array() - X.col(0).mean();
  for (int j = 1; j < 40; ++j) {
    const auto cj = X.col(j).array() - X.col(j).mean();
    direct = std::max(direct, std::abs((c0 * cj).sum()) /
                                  std::sqrt(c0.square().sum() *
                                            cj.square().sum()));
  }
  CHECK(a == doctest::Approx(direct).epsilon(1e-12));
  CHECK(a >= 0.0);
  CHECK(a <= 1.0);
}
