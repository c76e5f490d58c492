#pragma once

#include <map>
#include <string>

#include "sisreg/pipelines.hpp"
#include "sisreg/simgen.hpp"
#include "sisreg/theory.hpp"

namespace sisreg {

struct ExperimentConfig {
  SimulationSpec sim_spec;
  std::vector<PipelineSpec> pipeline_specs;
  std::vector<std::string> pipeline_labels;  // parallel; defaults to names
  int n_reps = 200;
  std::uint64_t seed = 0;
  std::string output_dir;

  void validate() const;
};

/// Parse the JSON config (documented in the README); unknown keys are
/// ConfigError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ReplicateRecord {
  int replicate = 0;
  std::string method;
  int model_size = 0;
  double l2 = 0.0;
  bool covered = false;  // true model inside the screening-stage set
};

struct MethodSummary {
  double median_model_size = 0.0;
  double median_l2_error = 0.0;
  double inclusion_accuracy = 0.0;
};

struct AggregateReport {
  std::map<std::string, MethodSummary> per_method;
  std::vector<ReplicateRecord> raw;  // replicate-major, method order fixed
};

/// Run every pipeline on n_reps independent instances. Replicates run
/// concurrently up to `jobs` threads; outputs are byte-identical for a
/// fixed config regardless of the thread count.
AggregateReport run_experiment(const ExperimentConfig& cfg, int jobs = 1);

/// Write raw.csv, report.csv, report.json under dir (created if needed).
void write_experiment_outputs(const AggregateReport& report,
                              const ExperimentConfig& cfg,
                              const std::string& dir);

enum class FigureKind { SortedSample, Histogram };

/// Plot-ready CSV export of a distribution report: the sorted sample or
/// Freedman-Diaconis-binned counts.
void emit_figure_data(const DistributionReport& rep, FigureKind kind,
                      const std::string& path);

/// JSON summary (ks statistic, medians, reference) next to the sample CSV.
void write_distribution_report(const DistributionReport& rep,
                               const std::string& csv_path,
                               const std::string& json_path);

/// Distribution of the minimum screened-model size that covers the true
/// model, over independently generated instances.
DistributionReport min_model_size_distribution(const SimulationSpec& spec,
                                               int n_draws,
                                               std::uint64_t seed,
                                               int jobs = 1);

}  // namespace sisreg
