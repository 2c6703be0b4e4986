#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "reach/discretization.hpp"
#include "reach/lattice.hpp"
#include "reach/systems.hpp"

namespace reach {

struct EulerOptions {
  /// Upper limit on the points one step may compute. Since every reachable
  /// set is a union of the points computed for it, this also caps #sets[k].
  std::uint64_t cardinality_cap = 50'000'000;
  unsigned workers = 1;
  /// Keep every reachable set; otherwise only sizes and the final set survive.
  bool keep_sets = true;
};

/// Everything one Euler sweep over a discretization produced.
struct RunRecord {
  Discretization disc;
  std::vector<LatticeSet> sets;            // n+1 sets, or just the final one
  std::vector<std::uint64_t> set_sizes;    // #sets[k], k = 0..n
  std::vector<std::uint64_t> cost_exact;   // exact cost per step, j = 0..n-1
  std::vector<double> vhat_R;              // n+1 surrogate reachable-set volumes
  std::vector<double> vhat_F;              // n+1 surrogate image volumes
  double error_bound = 0.0;
  double wall_time = 0.0;

  double total_cost() const;
  const LatticeSet& final_set() const { return sets.back(); }
};

/// Fully discrete Euler recursion
///   sets[0] = pi_{rho_0}(X0),
///   sets[k+1] = union over x in sets[k] of pi_{rho_{k+1}}(x + h_{k+1} F(x)),
/// recording the exact per-step cost and the surrogate volumes.
///
/// Throws ResourceError (carrying the step index) when a step would compute
/// more points than options.cardinality_cap.
RunRecord euler_run(const SystemSpec& system, const Discretization& disc,
                    const EulerOptions& options = {});

/// One line: n, E, total cost.
void write_summary(std::ostream& os, const RunRecord& record);

/// Headered CSV with one row per node: j, t_j, h_j, rho_j, #sets[j], cost_j, vhat_R, vhat_F.
void write_steps_csv(std::ostream& os, const RunRecord& record);

}  // namespace reach
