#include "reach/metrics.hpp"

#include <cmath>

#include "reach/error_model.hpp"
#include "reach/refine.hpp"

namespace reach {

SigmaCurves metric_sigma(const RunRecord& record, double L, double P) {
  const std::size_t n = record.disc.n();
  SigmaCurves curves;
  curves.error = error_partial_sums(record.disc, L, P);
  const double total_error = curves.error.back();
  for (double& v : curves.error) v /= total_error;

  const double total_cost = record.total_cost();
  curves.cost.resize(n + 1);
  double running = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i < n) running += static_cast<double>(record.cost_exact[i]);
    curves.cost[i] = running / total_cost;
  }
  return curves;
}

double metric_delta_cost(const RunRecord& record, const VolumeSplines& splines, int d_R, int d_F) {
  double deviation = 0.0;
  for (std::size_t j = 0; j < record.disc.n(); ++j) {
    const double predicted = cost_component(record.disc, splines, d_R, d_F, j);
    deviation += std::abs(predicted - static_cast<double>(record.cost_exact[j]));
  }
  return deviation / record.total_cost();
}

}  // namespace reach
