#pragma once

#include <string>

#include "sisreg/dantzig.hpp"
#include "sisreg/penalized.hpp"
#include "sisreg/screening.hpp"
#include "sisreg/types.hpp"

namespace sisreg {

enum class PipelineKind {
  SIS_SCAD,
  SIS_DS,
  SIS_DS_SCAD,
  SIS_DS_ADALASSO,
  ISIS_SCAD,
  SIS_SCAD_LD,
  SIS_SCAD_NB,
};

PipelineKind pipeline_kind_from_name(const std::string& name);
std::string pipeline_name(PipelineKind kind);

struct PipelineSpec {
  PipelineKind kind = PipelineKind::SIS_SCAD;
  int d = 0;        // first-stage size; 0 means the method's default
  int d_prime = 0;  // second-stage size; 0 means [n/log n]
  bool allow_d_ge_n = false;
  double scad_a = 3.7;
  double adalasso_gamma = 0.5;
  SolverConfig solver;
  DantzigConfig dantzig;
  bool sigma_known = true;  // pass the generator's sigma to the Dantzig stage

  int resolved_d(int n) const;
  int resolved_d_prime(int n) const;
};

struct StageTrace {
  std::string stage;
  IndexSet selected;  // original coordinates
  double seconds = 0.0;
};

struct PipelineOutcome {
  ModelEstimate final_estimate;  // beta on original p coordinates
  IndexSet screen_set;           // the screening-stage selected set
  std::vector<StageTrace> stage_trace;
};

/// Run one named method end to end on a dataset. Coefficients are reported
/// on the standardized scale in original index space.
PipelineOutcome run_pipeline(const Dataset& d, const PipelineSpec& spec);

/// The default iterative-screening inner step: marginal screening to
/// inner_d columns, then a BIC-tuned SCAD fit; falls back to the top-ranked
/// column when the fit selects nothing.
InnerSelector make_sis_scad_selector(int inner_d, SolverConfig solver = {},
                                     double scad_a = 3.7);

struct ClassifyResult {
  int train_errors = 0;
  int test_errors = 0;
  IndexSet selected_features;
  ModelEstimate estimate;  // on the screened feature space
};

/// Two-class pipeline: screen to [2n/log n] features, walk the SCAD path to
/// the target model size, then classify with the linear-discriminant rule
/// (SIS_SCAD_LD) or a per-feature Gaussian naive Bayes (SIS_SCAD_NB).
ClassifyResult classify(const Dataset& train, const Dataset& test,
                        const PipelineSpec& spec, int target_size);

}  // namespace sisreg
