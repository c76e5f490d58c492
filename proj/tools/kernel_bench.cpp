// Timing harness for the serial reference kernels against the OpenMP
// versions on screening-sized problems.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "sisreg/kernels.hpp"
#include "sisreg/rng.hpp"

using namespace sisreg;

namespace {

template <class F>
double time_ms(F&& fn, int repeats) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < repeats; ++k) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() /
         repeats;
}

}  // namespace

int main(int argc, char** argv) {
  int repeats = 5;
  if (argc > 1) repeats = std::atoi(argv[1]);

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %8s %8s %12s %12s %8s\n", "kernel", "n", "p",
              "serial(ms)", "omp(ms)", "speedup");

  for (const auto& [n, p] : {std::pair{200, 1000}, std::pair{200, 20000},
                             std::pair{800, 20000}}) {
    RngStream rng(7, 0, StreamPurpose::Design);
    Eigen::MatrixXd Z(n, p);
    rng.fill_normal(Z);
    Eigen::VectorXd y(n);
    rng.fill_normal(y);
    Eigen::VectorXd out_s, out_p, mean, sd;

    const double t_dot_s =
        time_ms([&] { kernels::col_dots_serial(Z, y, out_s); }, repeats);
    const double t_dot_p =
        time_ms([&] { kernels::col_dots(Z, y, out_p); }, repeats);
    std::printf("%-22s %8d %8d %12.3f %12.3f %7.2fx\n", "col_dots", n, p,
                t_dot_s, t_dot_p, t_dot_s / t_dot_p);

    const double t_mom_s = time_ms(
        [&] { kernels::col_moments_serial(Z, mean, sd, 1); }, repeats);
    const double t_mom_p =
        time_ms([&] { kernels::col_moments(Z, mean, sd, 1); }, repeats);
    std::printf("%-22s %8d %8d %12.3f %12.3f %7.2fx\n", "col_moments", n, p,
                t_mom_s, t_mom_p, t_mom_s / t_mom_p);

    if (p <= 2000) {
      const double t_cor_s = time_ms(
          [&] { (void)kernels::max_abs_corr_vs_serial(Z, 0); }, repeats);
      const double t_cor_p =
          time_ms([&] { (void)kernels::max_abs_corr_vs(Z, 0); }, repeats);
      std::printf("%-22s %8d %8d %12.3f %12.3f %7.2fx\n", "max_abs_corr",
                  n, p, t_cor_s, t_cor_p, t_cor_s / t_cor_p);
    }
  }
  return 0;
}
