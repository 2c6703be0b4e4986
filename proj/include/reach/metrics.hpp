#pragma once

#include <vector>

#include "reach/euler.hpp"

namespace reach {

class VolumeSplines;

struct SigmaCurves {
  std::vector<double> error;  // normalized running sum of error components
  std::vector<double> cost;   // normalized running sum of exact step costs
};

/// Cumulative normalized error and cost over the nodes 0..n. The cost curve
/// sums steps j <= min(i, n-1), so both curves end at 1.
SigmaCurves metric_sigma(const RunRecord& record, double L, double P);

/// Relative l1 error of the cost estimator against the exact step costs:
/// (1 / C_total) sum_j |C_j(splines) - C_hat_j|.
double metric_delta_cost(const RunRecord& record, const VolumeSplines& splines, int d_R, int d_F);

}  // namespace reach
