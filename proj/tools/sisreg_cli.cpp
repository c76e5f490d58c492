#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sisreg/bench.hpp"
#include "sisreg/core.hpp"
#include "sisreg/csv.hpp"
#include "sisreg/pipelines.hpp"
#include "sisreg/screening.hpp"

namespace {

using namespace sisreg;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::IoError:
    case ErrorCode::BadSpec:
      return 2;
    default:
      return 3;
  }
}

void cmd_screen(const std::string& data_path, int d,
                const std::string& out_path) {
  const Dataset data = load_dataset_csv(data_path);
  const StandardizedDesign sd = standardize(data);
  const int dd = d > 0 ? d : submodel_size(static_cast<int>(data.n()));
  const ScreeningResult scr = sis_screen(sd, dd);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) fail(ErrorCode::IoError, "cannot write " + out_path);
    out = &file;
  }
  *out << "rank,index,omega\n";
  for (int k = 0; k < dd; ++k) {
    const int j = scr.ranking[static_cast<std::size_t>(k)];
    *out << (k + 1) << ',' << j << ',' << format_double(scr.omega[j])
         << '\n';
  }
}

void cmd_fit(const std::string& data_path, const std::string& pipeline,
             int d, int d_prime, double sigma, const std::string& out_path) {
  const Dataset data = load_dataset_csv(data_path);
  PipelineSpec spec;
  spec.kind = pipeline_kind_from_name(pipeline);
  spec.d = d;
  spec.d_prime = d_prime;
  if (sigma > 0) {
    spec.dantzig.sigma = sigma;
    spec.sigma_known = true;
  } else {
    spec.sigma_known = false;
  }
  const PipelineOutcome out = run_pipeline(data, spec);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) fail(ErrorCode::IoError, "cannot write " + out_path);
    os = &file;
  }
  *os << "index,beta\n";
  for (int j : out.final_estimate.support)
    *os << j << ',' << format_double(out.final_estimate.beta[j]) << '\n';
  std::cerr << "selected " << out.final_estimate.support.size()
            << " of " << data.p() << " predictors\n";
}

void cmd_simulate(const std::string& design, int n, int p, int s,
                  double sigma, double rho, double a_coef,
                  std::uint64_t seed, const std::string& out_dir) {
  SimulationSpec spec;
  spec.design = [&] {
    if (design == "SIM1") return Design::SIM1;
    if (design == "SIM2") return Design::SIM2;
    if (design == "EX1") return Design::EX1;
    if (design == "EX2") return Design::EX2;
    if (design == "EX3") return Design::EX3;
    if (design == "IID_CORR") return Design::IID_CORR;
    fail(ErrorCode::ConfigError, "unknown design " + design);
  }();
  spec.n = n;
  spec.p = p;
  spec.s = s;
  spec.sigma = sigma;
  spec.rho = rho;
  spec.a_coef = a_coef;
  spec.seed = seed;
  const GeneratedInstance inst = generate_instance(spec, 0);
  std::filesystem::create_directories(out_dir);
  save_dataset_csv(inst.data, out_dir + "/dataset.csv");
  save_truth_csv(inst.truth, out_dir + "/truth.csv");
  std::cerr << "wrote " << out_dir << "/dataset.csv and truth.csv\n";
}

void cmd_bench(const std::string& config_path, std::uint64_t seed,
               bool seed_set, int jobs, int reps, const std::string& out) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed_set) cfg.seed = seed;
  if (reps > 0) cfg.n_reps = reps;
  if (!out.empty()) cfg.output_dir = out;
  const AggregateReport report = run_experiment(cfg, jobs);
  write_experiment_outputs(report, cfg, cfg.output_dir);
  for (const auto& [method, s] : report.per_method)
    std::cout << method << ": median_size=" << s.median_model_size
              << " median_l2=" << s.median_l2_error
              << " inclusion_acc=" << s.inclusion_accuracy << '\n';
}

void cmd_theory(const std::string& check, int n, int p, int draws,
                std::uint64_t seed, int jobs, const std::string& out_dir) {
  (void)jobs;
  std::filesystem::create_directories(out_dir);
  DistributionReport rep;
  if (check == "projection") {
    rep = projection_diag_check(n, p, draws, seed);
  } else if (check == "eigen") {
    rep = eigen_concentration_check(n, p, draws, seed);
  } else if (check == "spurious") {
    rep = max_spurious_corr(n, p, draws, seed);
  } else {
    fail(ErrorCode::ConfigError, "unknown theory check " + check);
  }
  write_distribution_report(rep, out_dir + "/" + check + "_sample.csv",
                            out_dir + "/" + check + "_summary.json");
  std::cout << check << ": ks=" << rep.ks_statistic;
  for (const auto& [k, v] : rep.summary) std::cout << ' ' << k << '=' << v;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable screening and selection toolkit"};
  app.require_subcommand(1);

  std::string data_path, out_path, pipeline = "SIS_SCAD", design = "SIM1";
  std::string config_path, check = "projection", out_dir = ".";
  int d = 0, d_prime = 0, n = 200, p = 1000, s = 8, reps = 0, jobs = 1;
  int draws = 1000;
  double sigma = 0.0, rho = 0.0, a_coef = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* screen = app.add_subcommand("screen", "rank predictors and keep d");
  screen->add_option("--data", data_path, "dataset CSV")->required();
  screen->add_option("--d", d, "submodel size (default [n/log n])");
  screen->add_option("--out", out_path, "output CSV (default stdout)");

  auto* fit = app.add_subcommand("fit", "run a pipeline on a dataset");
  fit->add_option("--data", data_path, "dataset CSV")->required();
  fit->add_option("--pipeline", pipeline, "pipeline name");
  fit->add_option("--d", d, "first-stage size");
  fit->add_option("--d-prime", d_prime, "second-stage size");
  fit->add_option("--sigma", sigma, "noise sd for the Dantzig stage");
  fit->add_option("--out", out_path, "estimate CSV (default stdout)");

  auto* sim = app.add_subcommand("simulate", "generate a synthetic instance");
  sim->add_option("--design", design, "SIM1|SIM2|EX1|EX2|EX3|IID_CORR");
  sim->add_option("--n", n, "rows");
  sim->add_option("--p", p, "columns");
  sim->add_option("--s", s, "true model size");
  sim->add_option("--sigma", sigma, "noise sd");
  sim->add_option("--rho", rho, "equicorrelation");
  sim->add_option("--a-coef", a_coef, "coefficient floor (0 = default)");
  sim->add_option("--seed", seed, "seed");
  sim->add_option("--out", out_dir, "output directory");

  auto* bench = app.add_subcommand("bench", "run a Monte Carlo experiment");
  bench->add_option("--config", config_path, "experiment JSON")->required();
  auto* seed_opt = bench->add_option("--seed", seed, "override seed");
  bench->add_option("--jobs", jobs, "replicate threads");
  bench->add_option("--reps", reps, "override replicate count");
  bench->add_option("--out", out_path, "override output directory");

  auto* theory = app.add_subcommand("theory", "distributional checks");
  theory->add_option("--check", check, "projection|eigen|spurious");
  theory->add_option("--n", n, "rows");
  theory->add_option("--p", p, "columns");
  theory->add_option("--draws", draws, "Monte Carlo draws");
  theory->add_option("--seed", seed, "seed");
  theory->add_option("--jobs", jobs, "threads");
  theory->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
    seed_set = seed_opt->count() > 0;
    if (screen->parsed()) cmd_screen(data_path, d, out_path);
    if (fit->parsed()) cmd_fit(data_path, pipeline, d, d_prime, sigma, out_path);
    if (sim->parsed())
      cmd_simulate(design, n, p, s, sigma > 0 ? sigma : 1.0, rho, a_coef,
                   seed, out_dir);
    if (bench->parsed())
      cmd_bench(config_path, seed, seed_set, jobs, reps, out_path);
    if (theory->parsed())
      cmd_theory(check, n, p, draws, seed, jobs, out_dir);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
