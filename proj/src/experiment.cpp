#include "reach/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "reach/metrics.hpp"

namespace reach {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

EulerOptions euler_options(const ExperimentConfig& config) {
  EulerOptions options;
  options.cardinality_cap = config.cap;
  options.workers = config.workers;
  return options;
}

std::string snapshot_name(std::size_t k) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "set_%05zu.txt", k);
  return buffer;
}

void write_snapshots(const fs::path& dir, const RunRecord& record, std::size_t stride) {
  const std::size_t offset = record.disc.n() + 1 - record.sets.size();
  for (std::size_t i = 0; i < record.sets.size(); ++i) {
    const std::size_t k = offset + i;
    auto os = open_output(dir / snapshot_name(k));
    os.precision(17);
    os << "# t " << record.disc.node(k) << '\n';
    write_points(os, record.sets[i], stride);
  }
}

void write_run_files(const fs::path& dir, const ExperimentConfig& config, const std::string& hash,
                     const std::string& algorithm, const RunRecord& record) {
  {
    auto os = open_output(dir / "summary.txt");
    os.precision(17);
    os << "config_hash " << hash << '\n'
       << "algorithm " << algorithm << '\n'
       << "system " << config.system << '\n'
       << "n " << record.disc.n() << '\n'
       << "E " << record.error_bound << '\n'
       << "cost " << record.total_cost() << '\n'
       << "final_set_size " << record.set_sizes.back() << '\n';
  }
  {
    auto os = open_output(dir / "steps.csv");
    write_steps_csv(os, record);
  }
  {
    auto os = open_output(dir / "discretization.txt");
    record.disc.write_text(os);
  }
  write_snapshots(dir / "sets", record, config.stride);
}

void write_capped(const fs::path& dir, const std::string& hash, const std::string& algorithm,
                  const ResourceError& e) {
  auto os = open_output(dir / "summary.txt");
  os.precision(17);
  os << "config_hash " << hash << '\n'
     << "algorithm " << algorithm << '\n'
     << "status capped\n"
     << "failed_step " << e.step() << '\n'
     << "projected_cost " << e.projected_cost() << '\n';
}

AlgorithmOutcome capped_outcome(const std::string& algorithm, const ResourceError& e) {
  AlgorithmOutcome out;
  out.algorithm = algorithm;
  out.capped = true;
  out.capped_step = e.step();
  out.capped_cost = e.projected_cost();
  return out;
}

AlgorithmOutcome run_uniform(const ExperimentConfig& config, const SystemSpec& system,
                             const fs::path& dir, const std::string& hash,
                             std::optional<UniformResult>* keep = nullptr) {
  try {
    UniformResult result = algorithm_uniform(system, config.eps, euler_options(config));
    write_run_files(dir, config, hash, "uniform", result.record);
    auto os = open_output(dir / "timing.csv");
    os << "reach_seconds\n" << result.record.wall_time << '\n';
    AlgorithmOutcome out{"uniform", result.disc.n(), result.record.error_bound,
                         result.record.total_cost(), result.record.total_cost()};
    if (keep) *keep = std::move(result);
    return out;
  } catch (const ResourceError& e) {
    write_capped(dir, hash, "uniform", e);
    return capped_outcome("uniform", e);
  }
}

void write_trace_files(const fs::path& dir, const RefinementTrace& trace) {
  {
    auto os = open_output(dir / "iterations.csv");
    write_iterations_csv(os, trace);
  }
  {
    auto os = open_output(dir / "thresholds.csv");
    write_thresholds_csv(os, trace);
  }
  auto os = open_output(dir / "timing.csv");
  write_timing_csv(os, trace);
}

AlgorithmOutcome run_adaptive(const ExperimentConfig& config, const SystemSpec& system,
                              const fs::path& dir, const std::string& hash,
                              std::optional<AdaptiveResult>* keep = nullptr) {
  const std::vector<double> ladder = resolve_ladder(config, system);
  try {
    AdaptiveResult result = algorithm_adaptive(system, ladder, euler_options(config));
    write_run_files(dir, config, hash, "adaptive", result.record);
    write_trace_files(dir, result.trace);
    AlgorithmOutcome out{"adaptive", result.disc.n(), result.record.error_bound,
                         result.record.total_cost(),
                         result.trace.thresholds.back().cost_cumulative};
    if (keep) *keep = std::move(result);
    return out;
  } catch (const AdaptiveResourceError& e) {
    write_capped(dir, hash, "adaptive", e);
    write_trace_files(dir, e.trace());
    return capped_outcome("adaptive", e);
  }
}

std::string format_cost(const AlgorithmOutcome& run, double value) {
  if (run.capped) return "";
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

}  // namespace

bool ExperimentOutcome::any_capped() const {
  for (const AlgorithmOutcome& run : runs) {
    if (run.capped) return true;
  }
  return false;
}

std::string comparison_header() {
  return "config_hash,system,d,L,eps,n_uniform,cost_uniform,n_adaptive,cost_adaptive_final,"
         "cost_adaptive_cumulative,ratio_final,status";
}

std::string comparison_row(const ExperimentConfig& config, const ExperimentOutcome& outcome) {
  const AlgorithmOutcome* uniform = nullptr;
  const AlgorithmOutcome* adaptive = nullptr;
  for (const AlgorithmOutcome& run : outcome.runs) {
    (run.algorithm == "uniform" ? uniform : adaptive) = &run;
  }
  std::ostringstream os;
  os.precision(17);
  const bool exponential = config.system == "exponential";
  os << outcome.hash << ',' << config.system << ',';
  if (exponential) os << config.d;
  os << ',';
  if (exponential) os << config.L;
  os << ',' << config.eps << ',';
  std::string status;
  auto describe = [&](const AlgorithmOutcome* run) {
    if (!run) return;
    if (run->capped) {
      if (!status.empty()) status += ' ';
      std::ostringstream s;
      s << run->algorithm << "_capped@" << run->capped_step << ':' << run->capped_cost;
      status += s.str();
    }
  };
  if (uniform && !uniform->capped) os << uniform->n;
  os << ',' << (uniform ? format_cost(*uniform, uniform->cost_final) : "") << ',';
  if (adaptive && !adaptive->capped) os << adaptive->n;
  os << ',' << (adaptive ? format_cost(*adaptive, adaptive->cost_final) : "") << ','
     << (adaptive ? format_cost(*adaptive, adaptive->cost_cumulative) : "") << ',';
  if (uniform && adaptive && !uniform->capped && !adaptive->capped) {
    os << adaptive->cost_final / uniform->cost_final;
  }
  describe(uniform);
  describe(adaptive);
  os << ',' << (status.empty() ? "ok" : status);
  return os.str();
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  validate(config);
  const SystemSpec system = build_system(config);
  const fs::path out = config.out;
  ExperimentOutcome outcome;
  outcome.hash = config_hash(config);
  {
    auto os = open_output(out / "config.txt");
    os << "# config_hash " << outcome.hash << '\n' << canonical_form(config);
  }
  switch (config.algorithm) {
    case Algorithm::uniform:
      outcome.runs.push_back(run_uniform(config, system, out, outcome.hash));
      break;
    case Algorithm::adaptive:
      outcome.runs.push_back(run_adaptive(config, system, out, outcome.hash));
      break;
    case Algorithm::compare: {
      outcome.runs.push_back(run_uniform(config, system, out / "uniform", outcome.hash));
      outcome.runs.push_back(run_adaptive(config, system, out / "adaptive", outcome.hash));
      auto os = open_output(out / "comparison.csv");
      os << comparison_header() << '\n' << comparison_row(config, outcome) << '\n';
      break;
    }
  }
  return outcome;
}

std::vector<ExperimentOutcome> run_sweep(const ExperimentConfig& base,
                                         const std::vector<std::string>& cells) {
  std::vector<ExperimentConfig> configs;
  for (const std::string& cell : cells) {
    std::string text = cell;
    for (char& c : text) {
      if (c == ';' || c == ' ' || c == '\t') c = '\n';
    }
    ExperimentConfig start = base;
    start.ladder.clear();
    ExperimentConfig config = parse_config_text(text, start);
    config.algorithm = Algorithm::compare;
    config.out = (fs::path(base.out) / ("cell_" + std::to_string(configs.size()))).string();
    validate(config);
    configs.push_back(std::move(config));
  }
  std::vector<ExperimentOutcome> outcomes;
  auto os = open_output(fs::path(base.out) / "sweep.csv");
  os << "cell," << comparison_header() << '\n';
  for (std::size_t i = 0; i < configs.size(); ++i) {
    outcomes.push_back(run_experiment(configs[i]));
    os << i << ',' << comparison_row(configs[i], outcomes.back()) << '\n';
    os.flush();
  }
  return outcomes;
}

ExperimentOutcome emit_figure_data(const ExperimentConfig& config) {
  validate(config);
  const SystemSpec system = build_system(config);
  const double L = system.lipschitz();
  const double P = system.bound();
  const fs::path out = config.out;
  ExperimentOutcome outcome;
  outcome.hash = config_hash(config);
  {
    auto os = open_output(out / "config.txt");
    os << "# config_hash " << outcome.hash << '\n' << canonical_form(config);
  }

  std::optional<UniformResult> uniform;
  std::optional<AdaptiveResult> adaptive;
  outcome.runs.push_back(run_uniform(config, system, out / "uniform", outcome.hash, &uniform));
  outcome.runs.push_back(run_adaptive(config, system, out / "adaptive", outcome.hash, &adaptive));

  // The uniform discretization needs no Euler run, so its step sizes and
  // error curve exist even when the run was capped.
  const Discretization uniform_disc =
      uniform ? uniform->disc
              : Discretization::uniform(system.horizon(),
                                        uniform_step_count(config.eps, L, P, system.horizon()));

  auto steps = open_output(out / "stepsizes.csv");
  steps.precision(17);
  steps << "config_hash,algorithm,j,t_j,h_j\n";
  auto write_steps = [&](const char* name, const Discretization& disc) {
    for (std::size_t j = 1; j <= disc.n(); ++j) {
      steps << outcome.hash << ',' << name << ',' << j << ',' << disc.node(j) << ','
            << disc.step(j) << '\n';
    }
  };
  write_steps("uniform", uniform_disc);
  if (adaptive) write_steps("adaptive", adaptive->disc);

  auto sigma = open_output(out / "sigma.csv");
  sigma.precision(17);
  sigma << "config_hash,algorithm,i,t_i,sigma_E,sigma_C\n";
  auto write_sigma = [&](const char* name, const Discretization& disc, const RunRecord* record) {
    std::vector<double> error = error_partial_sums(disc, L, P);
    std::vector<double> cost;
    if (record) {
      SigmaCurves curves = metric_sigma(*record, L, P);
      error = std::move(curves.error);
      cost = std::move(curves.cost);
    } else {
      const double total = error.back();
      for (double& v : error) v /= total;
    }
    for (std::size_t i = 0; i <= disc.n(); ++i) {
      sigma << outcome.hash << ',' << name << ',' << i << ',' << disc.node(i) << ',' << error[i]
            << ',';
      if (!cost.empty()) sigma << cost[i];
      sigma << '\n';
    }
  };
  write_sigma("uniform", uniform_disc, uniform ? &uniform->record : nullptr);
  if (adaptive) write_sigma("adaptive", adaptive->disc, &adaptive->record);

  if (adaptive) {
    auto delta = open_output(out / "delta_cost.csv");
    delta.precision(17);
    delta << "config_hash,level,eps,E,delta_C\n";
    for (const ThresholdRecord& th : adaptive->trace.thresholds) {
      if (!th.delta_cost_error) continue;
      delta << outcome.hash << ',' << th.level << ',' << th.threshold << ',' << th.error_bound
            << ',' << *th.delta_cost_error << '\n';
    }
    auto timing = open_output(out / "timing.csv");
    write_timing_csv(timing, adaptive->trace);
  }
  return outcome;
}

}  // namespace reach
