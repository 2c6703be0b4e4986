#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "reach/discretization.hpp"
#include "reach/error_model.hpp"
#include "reach/errors.hpp"
#include "reach/euler.hpp"
#include "reach/systems.hpp"

namespace reach {

/// Piecewise-linear interpolants of the surrogate volumes over the nodes of
/// one Euler run, with constant extrapolation outside [t_0, t_n].
class VolumeSplines {
 public:
  VolumeSplines(std::vector<double> nodes, std::vector<double> vR, std::vector<double> vF);

  static VolumeSplines from_record(const RunRecord& record);

  double volume_R(double t) const { return interpolate(vR_, t); }
  double volume_F(double t) const { return interpolate(vF_, t); }
  /// V(t) = v_R(t) v_F(t).
  double product(double t) const { return volume_R(t) * volume_F(t); }

  std::span<const double> nodes() const noexcept { return nodes_; }

 private:
  double interpolate(const std::vector<double>& values, double t) const;

  std::vector<double> nodes_;
  std::vector<double> vR_;
  std::vector<double> vF_;
};

/// Predicted points computed in step j -> j+1 (j in [0, n-1]):
///   v_R(t_j) / rho_j^{d_R} * v_F(t_j) h_{j+1}^{d_F} / rho_{j+1}^{d_F}.
double cost_component(const Discretization& disc, const VolumeSplines& splines, int d_R, int d_F,
                      std::size_t j);

/// Sum of all n predicted step costs.
double cost_estimate(const Discretization& disc, const VolumeSplines& splines, int d_R, int d_F);

/// Closed-form C(psi[disc; k]) - C(disc), always positive.
double delta_cost(const Discretization& disc, const VolumeSplines& splines, int d_R, int d_F,
                  std::size_t k);

/// Index in [0, n] with the largest predicted error decrease per predicted
/// extra cost, -delta_error / delta_cost. Ties go to the smallest index.
std::size_t greedy_select(const Discretization& disc, double L, double P,
                          const VolumeSplines& splines, int d_R, int d_F);

/// Smallest m with m^2 eps - m (e^{LT}-1)(PT + T/(2L)) - T^2 (e^{LT} - 1/2) >= 0.
std::size_t uniform_step_count(double eps, double L, double P, double T);

struct UniformResult {
  Discretization disc;
  RunRecord record;
};

/// Coarsest uniform discretization meeting eps, then one Euler run.
UniformResult algorithm_uniform(const SystemSpec& system, double eps,
                                const EulerOptions& options = {});

struct IterationRecord {
  std::size_t m;        // refinement iteration
  std::size_t chosen;   // k_m
  std::size_t n_after;  // n_{m+1}
  double delta_error;
  double delta_cost;
  double ratio;
  double error_after;
};

struct ThresholdRecord {
  std::size_t level;      // l; 0 is the unconditional start run
  double threshold;       // eps_l, NaN for l = 0
  double error_bound;     // E of the run's discretization
  std::size_t n;
  double cost_final;      // total exact cost of this run
  double cost_cumulative; // over all runs so far
  std::optional<double> delta_cost_error;  // estimator error vs the splines that planned it
  double reach_seconds;   // Euler time of this run
  double refine_seconds;  // planning time since the previous run
  RunRecord record;       // sets dropped
};

struct RefinementTrace {
  std::vector<IterationRecord> iterations;
  std::vector<ThresholdRecord> thresholds;
};

struct AdaptiveResult {
  Discretization disc;
  RunRecord record;
  RefinementTrace trace;
};

/// Thrown when a run inside the adaptive loop exceeds the cap; carries the
/// trace up to the failure.
class AdaptiveResourceError : public ResourceError {
 public:
  AdaptiveResourceError(const ResourceError& cause, RefinementTrace trace)
      : ResourceError(cause.what(), cause.step(), cause.projected_cost()), trace_(std::move(trace)) {}
  const RefinementTrace& trace() const noexcept { return trace_; }

 private:
  RefinementTrace trace_;
};

/// Iterative greedy space-time refinement. Starting from the single-interval
/// discretization, the loop runs Euler once unconditionally, then alternates
/// greedy subdivisions with Euler runs whenever E falls to the next
/// threshold, rebuilding the cost splines after every run.
///
/// `ladder` must be strictly decreasing and positive.
AdaptiveResult algorithm_adaptive(const SystemSpec& system, std::span<const double> ladder,
                                  const EulerOptions& options = {});

/// eps_target 2^k for k = K, ..., 0 where eps_target 2^K is the largest such
/// value strictly below E of the initial discretization (the target alone if
/// it already exceeds that E).
std::vector<double> default_ladder(const SystemSpec& system, double eps_target);

void write_iterations_csv(std::ostream& os, const RefinementTrace& trace);
void write_thresholds_csv(std::ostream& os, const RefinementTrace& trace);
/// Per-threshold wall-time split (Euler runs vs refinement planning).
void write_timing_csv(std::ostream& os, const RefinementTrace& trace);

}  // namespace reach
