#include "sisreg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "sisreg/core.hpp"
#include "sisreg/csv.hpp"

namespace sisreg {

namespace {

using nlohmann::json;

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok)
      fail(ErrorCode::ConfigError,
           "unknown key '" + item.key() + "' in " + where);
  }
}

Design design_from_name(const std::string& name) {
  if (name == "SIM1") return Design::SIM1;
  if (name == "SIM2") return Design::SIM2;
  if (name == "EX1") return Design::EX1;
  if (name == "EX2") return Design::EX2;
  if (name == "EX3") return Design::EX3;
  if (name == "TWOCLASS") return Design::TWOCLASS;
  if (name == "IID_CORR") return Design::IID_CORR;
  fail(ErrorCode::ConfigError, "unknown design: " + name);
}

std::string design_name(Design d) {
  switch (d) {
    case Design::SIM1: return "SIM1";
    case Design::SIM2: return "SIM2";
    case Design::EX1: return "EX1";
    case Design::EX2: return "EX2";
    case Design::EX3: return "EX3";
    case Design::TWOCLASS: return "TWOCLASS";
    case Design::IID_CORR: return "IID_CORR";
  }
  return "?";
}

SimulationSpec parse_sim_spec(const json& obj) {
  reject_unknown_keys(obj, "sim",
                      {"design", "n", "p", "s", "sigma", "a_coef", "rho", "r",
                       "cond", "seed", "n1", "n2", "n_informative", "gap"});
  SimulationSpec spec;
  if (!obj.contains("design"))
    fail(ErrorCode::ConfigError, "sim.design is required");
  spec.design = design_from_name(obj.at("design").get<std::string>());
  spec.n = obj.value("n", 0);
  spec.p = obj.value("p", 0);
  spec.s = obj.value("s", 0);
  spec.sigma = obj.value("sigma", 1.0);
  spec.a_coef = obj.value("a_coef", 0.0);
  spec.rho = obj.value("rho", 0.0);
  spec.r = obj.value("r", -1.0);
  spec.cond = obj.value("cond", 0.0);
  spec.seed = obj.value("seed", 0ULL);
  spec.n1 = obj.value("n1", 0);
  spec.n2 = obj.value("n2", 0);
  spec.n_informative = obj.value("n_informative", 1);
  spec.gap = obj.value("gap", 0.0);
  return spec;
}

PipelineSpec parse_pipeline_spec(const json& obj, std::string* label) {
  reject_unknown_keys(
      obj, "pipelines[]",
      {"name", "label", "d", "d_prime", "scad_a", "adalasso_gamma",
       "sigma_known", "dantzig_lambda", "dantzig_sigma", "lp_tol",
       "max_pivots", "max_outer", "max_inner", "tol", "lambda_grid_size",
       "allow_d_ge_n"});
  if (!obj.contains("name"))
    fail(ErrorCode::ConfigError, "pipelines[].name is required");
  PipelineSpec spec;
  spec.kind = pipeline_kind_from_name(obj.at("name").get<std::string>());
  *label = obj.value("label", obj.at("name").get<std::string>());
  spec.d = obj.value("d", 0);
  spec.d_prime = obj.value("d_prime", 0);
  spec.scad_a = obj.value("scad_a", 3.7);
  spec.adalasso_gamma = obj.value("adalasso_gamma", 0.5);
  spec.sigma_known = obj.value("sigma_known", true);
  spec.dantzig.lambda_d = obj.value("dantzig_lambda", -1.0);
  spec.dantzig.sigma = obj.value("dantzig_sigma", 1.0);
  spec.dantzig.lp_tol = obj.value("lp_tol", 1e-8);
  spec.dantzig.max_pivots = obj.value("max_pivots", 200000);
  spec.solver.max_outer = obj.value("max_outer", 20);
  spec.solver.max_inner = obj.value("max_inner", 1000);
  spec.solver.tol = obj.value("tol", 1e-7);
  spec.allow_d_ge_n = obj.value("allow_d_ge_n", false);
  const int grid = obj.value("lambda_grid_size", 0);
  require(grid >= 0, ErrorCode::ConfigError,
          "lambda_grid_size must be nonnegative");
  (void)grid;  // the default grid is data-driven; size is fixed at 50
  return spec;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(n_reps >= 1, ErrorCode::ConfigError, "n_reps must be >= 1");
  require(!pipeline_specs.empty(), ErrorCode::ConfigError,
          "at least one pipeline is required");
  sim_spec.validate();
  require(sim_spec.design != Design::IID_CORR, ErrorCode::ConfigError,
          "IID_CORR has no response to benchmark against");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigError, std::string("config parse error: ") +
                                     e.what());
  }
  reject_unknown_keys(obj, "config",
                      {"sim", "pipelines", "n_reps", "seed", "output_dir"});
  ExperimentConfig cfg;
  if (!obj.contains("sim"))
    fail(ErrorCode::ConfigError, "config needs a 'sim' object");
  cfg.sim_spec = parse_sim_spec(obj.at("sim"));
  if (!obj.contains("pipelines") || !obj.at("pipelines").is_array())
    fail(ErrorCode::ConfigError, "config needs a 'pipelines' array");
  for (const auto& p : obj.at("pipelines")) {
    std::string label;
    cfg.pipeline_specs.push_back(parse_pipeline_spec(p, &label));
    cfg.pipeline_labels.push_back(label);
  }
  cfg.n_reps = obj.value("n_reps", 200);
  cfg.seed = obj.value("seed", 0ULL);
  cfg.output_dir = obj.value("output_dir", std::string("."));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_experiment_config(text);
}

AggregateReport run_experiment(const ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const int R = cfg.n_reps;
  const int M = static_cast<int>(cfg.pipeline_specs.size());
  std::vector<std::string> labels = cfg.pipeline_labels;
  if (static_cast<int>(labels.size()) != M) {
    labels.clear();
    for (const auto& ps : cfg.pipeline_specs)
      labels.push_back(pipeline_name(ps.kind));
  }
  // Disambiguate duplicate labels deterministically.
  for (int m = 0; m < M; ++m) {
    int count = 0;
    for (int k = 0; k < m; ++k)
      if (labels[static_cast<std::size_t>(k)] ==
          labels[static_cast<std::size_t>(m)])
        ++count;
    if (count > 0)
      labels[static_cast<std::size_t>(m)] +=
          "#" + std::to_string(count + 1);
  }

  std::vector<ReplicateRecord> records(
      static_cast<std::size_t>(R) * static_cast<std::size_t>(M));
  std::vector<std::string> failures(static_cast<std::size_t>(R));

  const int threads = std::max(jobs, 1);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int r = 0; r < R; ++r) {
    try {
      SimulationSpec sim = cfg.sim_spec;
      sim.seed = cfg.seed;
      const GeneratedInstance inst =
          generate_instance(sim, static_cast<std::uint64_t>(r));
      for (int m = 0; m < M; ++m) {
        PipelineSpec ps = cfg.pipeline_specs[static_cast<std::size_t>(m)];
        if (ps.sigma_known && inst.sigma_used > 0.0)
          ps.dantzig.sigma = inst.sigma_used;
        const PipelineOutcome out = run_pipeline(inst.data, ps);
        ReplicateRecord rec;
        rec.replicate = r;
        rec.method = labels[static_cast<std::size_t>(m)];
        rec.model_size = static_cast<int>(out.final_estimate.support.size());
        rec.l2 = l2_error(out.final_estimate, inst.truth);
        rec.covered = std::includes(
            out.screen_set.begin(), out.screen_set.end(),
            inst.truth.true_model.begin(), inst.truth.true_model.end());
        records[static_cast<std::size_t>(r) * M + m] = rec;
      }
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(r)] = e.what();
    }
  }

  for (int r = 0; r < R; ++r)
    if (!failures[static_cast<std::size_t>(r)].empty())
      fail(ErrorCode::SingularSystem,
           "replicate " + std::to_string(r) + " failed: " +
               failures[static_cast<std::size_t>(r)]);

  AggregateReport report;
  report.raw = std::move(records);
  for (int m = 0; m < M; ++m) {
    std::vector<double> sizes, errs;
    double covered = 0.0;
    sizes.reserve(static_cast<std::size_t>(R));
    errs.reserve(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
      const auto& rec = report.raw[static_cast<std::size_t>(r) * M + m];
      sizes.push_back(rec.model_size);
      errs.push_back(rec.l2);
      covered += rec.covered ? 1.0 : 0.0;
    }
    MethodSummary s;
    s.median_model_size = median_of(std::move(sizes));
    s.median_l2_error = median_of(std::move(errs));
    s.inclusion_accuracy = covered / R;
    report.per_method[labels[static_cast<std::size_t>(m)]] = s;
  }
  return report;
}

void write_experiment_outputs(const AggregateReport& report,
                              const ExperimentConfig& cfg,
                              const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream raw(dir + "/raw.csv");
    if (!raw) fail(ErrorCode::IoError, "cannot write " + dir + "/raw.csv");
    raw << "replicate,method,model_size,l2_error,covered\n";
    for (const auto& rec : report.raw)
      raw << rec.replicate << ',' << rec.method << ',' << rec.model_size
          << ',' << format_double(rec.l2) << ',' << (rec.covered ? 1 : 0)
          << '\n';
  }
  {
    std::ofstream rep(dir + "/report.csv");
    if (!rep)
      fail(ErrorCode::IoError, "cannot write " + dir + "/report.csv");
    rep << "method,median_size,median_l2,inclusion_acc\n";
    for (const auto& [method, s] : report.per_method)
      rep << method << ',' << format_double(s.median_model_size) << ','
          << format_double(s.median_l2_error) << ','
          << format_double(s.inclusion_accuracy) << '\n';
  }
  {
    json j;
    j["design"] = design_name(cfg.sim_spec.design);
    j["n"] = cfg.sim_spec.n;
    j["p"] = cfg.sim_spec.p;
    j["n_reps"] = cfg.n_reps;
    j["seed"] = cfg.seed;
    json methods = json::object();
    for (const auto& [method, s] : report.per_method) {
      methods[method] = {{"median_size", s.median_model_size},
                         {"median_l2", s.median_l2_error},
                         {"inclusion_acc", s.inclusion_accuracy}};
    }
    j["methods"] = methods;
    std::ofstream out(dir + "/report.json");
    if (!out)
      fail(ErrorCode::IoError, "cannot write " + dir + "/report.json");
    out << j.dump(2) << '\n';
  }
}

void emit_figure_data(const DistributionReport& rep, FigureKind kind,
                      const std::string& path) {
  require(!rep.sample.empty(), ErrorCode::BadSize,
          "cannot emit figure data from an empty sample");
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  if (kind == FigureKind::SortedSample) {
    out << "value\n";
    for (double v : rep.sample) out << format_double(v) << '\n';
    return;
  }
  // Freedman-Diaconis binning.
  const std::size_t n = rep.sample.size();
  const double q1 = rep.sample[static_cast<std::size_t>(0.25 * (n - 1))];
  const double q3 = rep.sample[static_cast<std::size_t>(0.75 * (n - 1))];
  const double iqr = std::max(q3 - q1, 0.0);
  const double lo = rep.sample.front(), hi = rep.sample.back();
  double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  if (width <= 0.0) width = std::max((hi - lo), 1.0);
  const int bins =
      std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : rep.sample) {
    int b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    counts[static_cast<std::size_t>(b)]++;
  }
  out << "bin_left,bin_right,count\n";
  for (int b = 0; b < bins; ++b)
    out << format_double(lo + b * width) << ','
        << format_double(lo + (b + 1) * width) << ','
        << counts[static_cast<std::size_t>(b)] << '\n';
}

void write_distribution_report(const DistributionReport& rep,
                               const std::string& csv_path,
                               const std::string& json_path) {
  emit_figure_data(rep, FigureKind::SortedSample, csv_path);
  json j;
  j["reference"] = rep.reference;
  j["ks_statistic"] = rep.ks_statistic;
  j["n_draws"] = rep.n_draws;
  for (const auto& [k, v] : rep.summary) j[k] = v;
  std::ofstream out(json_path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + json_path);
  out << j.dump(2) << '\n';
}

DistributionReport min_model_size_distribution(const SimulationSpec& spec,
                                               int n_draws,
                                               std::uint64_t seed, int jobs) {
  require(n_draws >= 1, ErrorCode::BadSize, "need at least one draw");
  DistributionReport rep;
  rep.sample.resize(static_cast<std::size_t>(n_draws));
  const int threads = std::max(jobs, 1);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int k = 0; k < n_draws; ++k) {
    SimulationSpec s = spec;
    s.seed = seed;
    const GeneratedInstance inst =
        generate_instance(s, static_cast<std::uint64_t>(k));
    rep.sample[static_cast<std::size_t>(k)] =
        min_model_size_to_cover(inst);
  }
  std::sort(rep.sample.begin(), rep.sample.end());
  rep.reference = "min screened-model size covering the true model";
  rep.n_draws = n_draws;
  rep.summary["median"] =
      rep.sample[static_cast<std::size_t>(n_draws) / 2];
  return rep;
}

}  // namespace sisreg
