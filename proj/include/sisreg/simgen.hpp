#pragma once

#include "sisreg/rng.hpp"
#include "sisreg/types.hpp"

namespace sisreg {

enum class Design { SIM1, SIM2, EX1, EX2, EX3, TWOCLASS, IID_CORR };

struct SimulationSpec {
  Design design = Design::SIM1;
  int n = 0;
  int p = 0;
  int s = 0;
  double sigma = 1.0;
  double a_coef = 0.0;  // 0 means the design default 4 log(n)/sqrt(n)
  double rho = 0.0;     // equicorrelation for EX designs
  double r = -1.0;      // SIM2 linkage; < 0 means 1 - 4 log(n)/p
  double cond = 0.0;    // SIM2 condition target; 0 means sqrt(n)/log(n)
  std::uint64_t seed = 0;
  // Two-class extras.
  int n1 = 0, n2 = 0;
  int n_informative = 1;
  double gap = 0.0;

  void validate() const;
};

struct GeneratedInstance {
  Dataset data;
  GroundTruth truth;
  double sigma_used = 0.0;
  SimulationSpec design_echo;
};

/// Coefficient floor a = mult * log(n) / sqrt(n).
double coef_floor(int n, double mult = 4.0);

/// Length-p vector with s nonzeros at uniformly chosen positions, each of
/// the form (-1)^u (a + |z|) with u ~ Bernoulli(0.4) and z standard normal.
VectorXd gen_coefficients(int p, int s, double a_coef, RngStream& positions,
                          RngStream& values);

GeneratedInstance gen_sim1(const SimulationSpec& spec, std::uint64_t replicate);
GeneratedInstance gen_sim2(const SimulationSpec& spec, std::uint64_t replicate);
GeneratedInstance gen_example(const SimulationSpec& spec,
                              std::uint64_t replicate);
GeneratedInstance gen_twoclass_instance(const SimulationSpec& spec,
                                        std::uint64_t replicate);

/// Pure i.i.d. standard Gaussian design, zero response (for the spurious
/// correlation studies).
Dataset gen_iid_corr(int n, int p, RngStream& rng);

/// Labeled two-class data: class +1 rows are N(gap on the informative
/// coordinates, I), class -1 rows are N(0, I). y holds the +-1 labels.
Dataset gen_twoclass(int n1, int n2, int p, const IndexSet& informative,
                     double gap, RngStream& rng);

/// Dispatch on spec.design with the replicate-indexed streams.
GeneratedInstance generate_instance(const SimulationSpec& spec,
                                    std::uint64_t replicate);

/// Random s x s SPD matrix with the given condition number: random
/// orthogonal conjugation of log-spaced eigenvalues in [1, cond].
MatrixXd random_spd_with_condition(int s, double cond, RngStream& rng);

}  // namespace sisreg
