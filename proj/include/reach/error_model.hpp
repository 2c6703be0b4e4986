#pragma once

#include <vector>

#include "reach/discretization.hpp"

namespace reach {

/// x^e for small nonnegative integer exponents by repeated multiplication.
inline double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

/// Contribution of node j to the a-priori error bound:
///   j = 0:  e^{LT} rho_0 / 2
///   j >= 1: e^{L(T - t_j)} (e^{L h_j} - 1) (P h_j + rho_j/2 + rho_j/(2 L h_j))
double error_component(const Discretization& disc, double L, double P, std::size_t j);

/// All n+1 components.
std::vector<double> error_components(const Discretization& disc, double L, double P);

/// E(h, t, rho) = sum of all components.
double error_total(const Discretization& disc, double L, double P);

/// Running sums of the components; entry k bounds dist_H at node t_k.
std::vector<double> error_partial_sums(const Discretization& disc, double L, double P);

/// Closed-form E(psi[disc; k]) - E(disc). Requires rho_j = 2 L P h_j^2 for
/// j >= 1 and throws PreconditionError otherwise.
double delta_error(const Discretization& disc, double L, double P, std::size_t k);

namespace detail {
/// delta_error without the O(n) coupling check; callers verify it once.
double delta_error_unchecked(const Discretization& disc, double L, double P, std::size_t k);
}  // namespace detail

}  // namespace reach
