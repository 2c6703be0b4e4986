#include "reach/error_model.hpp"

#include <cmath>

#include "reach/errors.hpp"

namespace reach {

double error_component(const Discretization& disc, double L, double P, std::size_t j) {
  const double T = disc.horizon();
  if (j > disc.n()) throw InputError("error_component: index outside [0, n]");
  if (j == 0) return std::exp(L * T) * disc.resolution(0) / 2.0;
  const double h = disc.step(j);
  const double rho = disc.resolution(j);
  return std::exp(L * (T - disc.node(j))) * std::expm1(L * h) *
         (P * h + rho / 2.0 + rho / (2.0 * L * h));
}

std::vector<double> error_components(const Discretization& disc, double L, double P) {
  std::vector<double> out(disc.n() + 1);
  for (std::size_t j = 0; j <= disc.n(); ++j) out[j] = error_component(disc, L, P, j);
  return out;
}

double error_total(const Discretization& disc, double L, double P) {
  double total = 0.0;
  for (std::size_t j = 0; j <= disc.n(); ++j) total += error_component(disc, L, P, j);
  return total;
}

std::vector<double> error_partial_sums(const Discretization& disc, double L, double P) {
  std::vector<double> out = error_components(disc, L, P);
  for (std::size_t j = 1; j < out.size(); ++j) out[j] += out[j - 1];
  return out;
}

double delta_error(const Discretization& disc, double L, double P, std::size_t k) {
  if (k > disc.n()) throw InputError("delta_error: index outside [0, n]");
  if (!disc.satisfies_coupling(L, P)) {
    throw PreconditionError("delta_error: resolutions are not coupled as rho_j = 2 L P h_j^2");
  }
  return detail::delta_error_unchecked(disc, L, P, k);
}

double detail::delta_error_unchecked(const Discretization& disc, double L, double P,
                                     std::size_t k) {
  const double T = disc.horizon();
  if (k == 0) return -3.0 * std::exp(L * T) / 8.0 * disc.resolution(0);
  const double h = disc.step(k);
  return -std::exp(L * (T - disc.node(k))) * std::expm1(L * h) * (P * h + 0.75 * L * P * h * h);
}

}  // namespace reach
