#include <doctest.h>

#include <cmath>
#include <random>

#include "reach/error_model.hpp"
#include "reach/errors.hpp"

using namespace reach;

namespace {

const double e = std::exp(1.0);

// Direct evaluation of the bound on the plain arrays.
double oracle_error(const Discretization& disc, double L, double P) {
  const double T = disc.horizon();
  double total = std::exp(L * T) * disc.resolution(0) / 2.0;
  for (std::size_t j = 1; j <= disc.n(); ++j) {
    const double h = disc.step(j), rho = disc.resolution(j);
    total += std::exp(L * (T - disc.node(j))) * (std::exp(L * h) - 1.0) *
             (P * h + rho / 2.0 + rho / (2.0 * L * h));
  }
  return total;
}

}  // namespace

TEST_CASE("error components of the initial discretization") {
  const Discretization disc = Discretization::initial(1.0, 1.0, e);
  CHECK(error_component(disc, 1.0, e, 0) == doctest::Approx(e * e).epsilon(1e-14));
  CHECK(error_component(disc, 1.0, e, 1) == doctest::Approx((e - 1.0) * 3.0 * e).epsilon(1e-14));
  CHECK(error_total(disc, 1.0, e) == doctest::Approx(e * e + (e - 1.0) * 3.0 * e).epsilon(1e-14));
  CHECK(error_total(disc, 1.0, e) == doctest::Approx(21.40).epsilon(1e-3));
  CHECK_THROWS_AS(error_component(disc, 1.0, e, 2), InputError);
}

TEST_CASE("error bound matches direct evaluation") {
  std::mt19937_64 rng(31);
  for (int c = 0; c < 50; ++c) {
    const double L = 0.3 + 0.1 * c, P = 0.5 + 0.05 * c;
    Discretization disc = Discretization::initial(1.0, L, P);
    for (int s = 0; s < 30; ++s) {
      std::uniform_int_distribution<std::size_t> pick(0, disc.n());
      disc = disc.subdivide(pick(rng));
    }
    CHECK(error_total(disc, L, P) == doctest::Approx(oracle_error(disc, L, P)).epsilon(1e-12));
    const auto partial = error_partial_sums(disc, L, P);
    REQUIRE(partial.size() == disc.n() + 1);
    CHECK(partial.back() == error_total(disc, L, P));
    for (std::size_t k = 1; k < partial.size(); ++k) CHECK(partial[k] > partial[k - 1]);
  }
}

TEST_CASE("error components vanish under coupled refinement") {
  const double L = 1.0, P = 2.0;
  double previous = INFINITY;
  for (int level = 1; level < 20; ++level) {
    const double h = std::ldexp(1.0, -level);
    const double rho = 2.0 * L * P * h * h;
    const Discretization disc = Discretization::from_arrays({h, 1.0 - h}, {rho, rho, rho});
    const double component = error_component(disc, L, P, 1);
    CHECK(component < previous);
    previous = component;
  }
  CHECK(previous < 1e-5);
}

TEST_CASE("closed-form error decrease") {
  const Discretization disc = Discretization::initial(1.0, 1.0, e);
  const double dE0 = delta_error(disc, 1.0, e, 0);
  CHECK(dE0 == doctest::Approx(-0.75 * e * e).epsilon(1e-14));
  CHECK(dE0 == doctest::Approx(oracle_error(disc.subdivide(0), 1.0, e) - oracle_error(disc, 1.0, e))
                   .epsilon(1e-12));
  const double dE1 = delta_error(disc, 1.0, e, 1);
  CHECK(dE1 == doctest::Approx(oracle_error(disc.subdivide(1), 1.0, e) - oracle_error(disc, 1.0, e))
                   .epsilon(1e-12));
  CHECK(dE1 <= -0.5 * error_component(disc, 1.0, e, 1));

  // Tiny L: e^{LT} -> 1 and the k = 0 decrease tends to -3 rho_0 / 8.
  const double L = 1e-9;
  const Discretization flat = Discretization::initial(1.0, L, 1.0);
  CHECK(delta_error(flat, L, 1.0, 0) ==
        doctest::Approx(-0.375 * flat.resolution(0)).epsilon(1e-8));
}

TEST_CASE("closed-form decrease needs the coupling") {
  const Discretization uncoupled = Discretization::uniform(1.0, 3);
  CHECK_THROWS_AS(delta_error(uncoupled, 1.0, 1.0, 1), PreconditionError);
}

TEST_CASE("integer powers") {
  CHECK(ipow(3.0, 0) == 1.0);
  CHECK(ipow(3.0, 1) == 3.0);
  CHECK(ipow(0.5, 3) == 0.125);
}
