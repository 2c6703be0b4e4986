#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reach/config.hpp"
#include "reach/refine.hpp"

namespace reach {

/// Outcome of one algorithm inside an experiment. A capped run keeps the
/// failing step and projected cost instead of a record.
struct AlgorithmOutcome {
  std::string algorithm;
  std::size_t n = 0;
  double error_bound = 0.0;
  double cost_final = 0.0;
  double cost_cumulative = 0.0;
  bool capped = false;
  std::size_t capped_step = 0;
  double capped_cost = 0.0;
};

struct ExperimentOutcome {
  std::string hash;
  std::vector<AlgorithmOutcome> runs;
  bool any_capped() const;
};

/// Runs the configured algorithm(s) and writes into config.out:
///   config.txt, summary.txt, steps.csv, discretization.txt, timing.csv,
///   sets/set_<k>.txt (every stride-th point), and for adaptive runs
///   iterations.csv and thresholds.csv. Compare mode writes each algorithm
///   into its own subdirectory plus comparison.csv.
/// Everything except timing.csv is byte-identical across repeated runs.
///
/// A capped run is recorded in the outputs; the caller decides the exit code.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Header and one row of comparison.csv.
std::string comparison_header();
std::string comparison_row(const ExperimentConfig& config, const ExperimentOutcome& outcome);

/// Runs one compare experiment per cell; cells are `key=value` lists separated
/// by whitespace or ';', applied on top of `base` minus its ladder. Writes sweep.csv into
/// base.out and each cell into cell_<i>/.
std::vector<ExperimentOutcome> run_sweep(const ExperimentConfig& base,
                                         const std::vector<std::string>& cells);

/// Figure data for one configuration, written into config.out:
///   stepsizes.csv  (algorithm, j, t_j, h_j)
///   sigma.csv      (algorithm, i, t_i, sigma_E, sigma_C)
///   delta_cost.csv (level, eps, E, delta_C) over the adaptive thresholds
///   timing.csv     (Euler vs refinement time per threshold)
/// next to the uniform/ and adaptive/ run directories, whose sets/ hold the
/// snapshots at every node.
/// Capped algorithms contribute whatever does not need their Euler run.
ExperimentOutcome emit_figure_data(const ExperimentConfig& config);

}  // namespace reach
