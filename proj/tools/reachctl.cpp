// reachctl: command-line front end for the reachability experiments.
//
// Exit codes: 0 ok, 2 configuration error, 3 cardinality cap hit,
// 4 internal invariant violation, 1 anything else (I/O).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reach/config.hpp"
#include "reach/experiment.hpp"
#include "reach/selftest.hpp"

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kResource = 3, kInvariant = 4 };

struct Overrides {
  std::string config_path;
  std::optional<std::string> system;
  std::optional<double> L;
  std::optional<std::size_t> d;
  std::optional<double> eps;
  std::optional<std::string> ladder;
  std::optional<int> d_R;
  std::optional<int> d_F;
  std::optional<double> cap;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> stride;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Config file (key = value or JSON); '-' reads stdin");
  cmd->add_option("--system", o.system, "exponential | michaelis-menten");
  cmd->add_option("--L", o.L, "Growth rate of the exponential system");
  cmd->add_option("--d", o.d, "Dimension of the exponential system");
  cmd->add_option("--eps", o.eps, "Target error tolerance");
  cmd->add_option("--ladder", o.ladder, "Comma-separated decreasing thresholds ending at eps");
  cmd->add_option("--d-R", o.d_R, "Effective dimension of the reachable sets");
  cmd->add_option("--d-F", o.d_F, "Effective dimension of the images of F");
  cmd->add_option("--cap", o.cap, "Maximum grid points computed in one step");
  cmd->add_option("--workers", o.workers, "Worker threads inside each Euler step");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Seed for the randomized self-test suites");
  cmd->add_option("--stride", o.stride, "Keep every stride-th point in written sets");
}

std::string read_all(std::istream& is) {
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

reach::ExperimentConfig load_config(const Overrides& o, reach::Algorithm algorithm) {
  reach::ExperimentConfig config;
  config.algorithm = algorithm;
  if (!o.config_path.empty()) {
    std::string text;
    if (o.config_path == "-") {
      text = read_all(std::cin);
    } else {
      std::ifstream is(o.config_path);
      if (!is) throw reach::ConfigError("cannot read config file " + o.config_path);
      text = read_all(is);
    }
    const auto first = text.find_first_not_of(" \t\r\n");
    config = first != std::string::npos && text[first] == '{'
                 ? reach::parse_config_json(text, config)
                 : reach::parse_config_text(text, config);
    config.algorithm = algorithm;
  }
  auto set = [&](const char* key, const auto& value) {
    if (!value) return;
    std::ostringstream os;
    os.precision(17);
    os << *value;
    reach::set_config_value(config, key, os.str());
  };
  set("system", o.system);
  set("L", o.L);
  set("d", o.d);
  set("eps", o.eps);
  if (o.eps && !o.ladder) config.ladder.clear();
  set("ladder", o.ladder);
  set("d_R", o.d_R);
  set("d_F", o.d_F);
  set("cap", o.cap);
  set("workers", o.workers);
  set("out", o.out);
  set("seed", o.seed);
  set("stride", o.stride);
  reach::validate(config);
  return config;
}

void print_outcome(const reach::ExperimentOutcome& outcome) {
  for (const auto& run : outcome.runs) {
    if (run.capped) {
      std::printf("%-8s capped at step %zu (projected %.6g points)\n", run.algorithm.c_str(),
                  run.capped_step, run.capped_cost);
    } else {
      std::printf("%-8s n=%zu E=%.6g cost_final=%.6g cost_cumulative=%.6g\n",
                  run.algorithm.c_str(), run.n, run.error_bound, run.cost_final,
                  run.cost_cumulative);
    }
  }
  std::printf("config_hash %s\n", outcome.hash.c_str());
}

std::vector<std::string> default_cells() {
  return {"d=1 L=1 eps=0.25", "d=1 L=1 eps=0.125", "d=2 L=1 eps=0.25", "d=1 L=2 eps=2",
          "d=1 L=2 eps=1"};
}

std::vector<std::string> read_cells(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw reach::ConfigError("cannot read cell file " + path);
  std::vector<std::string> cells;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    cells.push_back(line);
  }
  return cells;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-based reachable set computation with uniform and adaptive discretizations"};
  app.require_subcommand(1);

  Overrides o;
  auto* uniform = app.add_subcommand("run-uniform", "Algorithm 1: coarsest uniform discretization");
  auto* adaptive = app.add_subcommand("run-adaptive", "Algorithm 2: greedy iterative refinement");
  auto* compare = app.add_subcommand("compare", "Both algorithms and a comparison row");
  auto* sweep = app.add_subcommand("sweep", "Compare over a list of cells");
  auto* figures = app.add_subcommand("emit-figure-data", "CSV data behind the step-size, sigma and delta_C plots");
  auto* selftest = app.add_subcommand("selftest", "Run the randomized invariant suites");
  for (auto* cmd : {uniform, adaptive, compare, sweep, figures, selftest}) add_common_flags(cmd, o);

  std::string cells_path;
  std::vector<std::string> cells;
  sweep->add_option("--cells", cells_path, "File with one cell (key=value ...) per line");
  sweep->add_option("--cell", cells, "One cell, e.g. \"d=2 L=1 eps=0.25\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (selftest->parsed()) {
      const auto config = load_config(o, reach::Algorithm::adaptive);
      bool ok = true;
      for (const auto& suite : reach::run_selftests(config.seed)) {
        std::printf("%s %s: %zu checks, %zu failures%s%s\n", suite.ok() ? "PASS" : "FAIL",
                    suite.name.c_str(), suite.checks, suite.failures,
                    suite.failures ? "; first: " : "", suite.first_failure.c_str());
        ok = ok && suite.ok();
      }
      return ok ? kOk : kInvariant;
    }
    if (sweep->parsed()) {
      const auto base = load_config(o, reach::Algorithm::compare);
      if (!cells_path.empty()) {
        auto more = read_cells(cells_path);
        cells.insert(cells.end(), more.begin(), more.end());
      }
      if (cells.empty()) cells = default_cells();
      const auto outcomes = reach::run_sweep(base, cells);
      bool capped = false;
      for (const auto& outcome : outcomes) {
        print_outcome(outcome);
        capped = capped || outcome.any_capped();
      }
      return capped ? kResource : kOk;
    }
    reach::ExperimentOutcome outcome;
    if (figures->parsed()) {
      outcome = reach::emit_figure_data(load_config(o, reach::Algorithm::compare));
    } else {
      const auto algorithm = uniform->parsed()    ? reach::Algorithm::uniform
                             : adaptive->parsed() ? reach::Algorithm::adaptive
                                                  : reach::Algorithm::compare;
      outcome = reach::run_experiment(load_config(o, algorithm));
    }
    print_outcome(outcome);
    return outcome.any_capped() ? kResource : kOk;
  } catch (const reach::InputError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const reach::ResourceError& e) {
    std::fprintf(stderr, "resource cap: %s (step %zu, projected %.6g points)\n", e.what(), e.step(),
                 e.projected_cost());
    return kResource;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return kInvariant;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kOther;
  }
}
