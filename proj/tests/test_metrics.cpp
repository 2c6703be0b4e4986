#include <doctest.h>

#include <cmath>

#include "reach/metrics.hpp"
#include "reach/refine.hpp"

using namespace reach;

TEST_CASE("sigma curves end at one") {
  const SystemSpec sys = make_exponential_system(1, 2.0);
  const UniformResult u = algorithm_uniform(sys, 2.0);
  const SigmaCurves curves = metric_sigma(u.record, sys.lipschitz(), sys.bound());
  REQUIRE(curves.error.size() == u.disc.n() + 1);
  REQUIRE(curves.cost.size() == u.disc.n() + 1);
  CHECK(curves.error.back() == 1.0);
  CHECK(curves.cost.back() == 1.0);
  CHECK(curves.cost[u.disc.n() - 1] == 1.0);
  for (std::size_t i = 1; i < curves.error.size(); ++i) {
    CHECK(curves.error[i] >= curves.error[i - 1]);
    CHECK(curves.cost[i] >= curves.cost[i - 1]);
  }
}

TEST_CASE("uniform runs front-load error and back-load cost") {
  for (auto [d, L, eps] : {std::tuple{1, 2.0, 2.0}, std::tuple{2, 1.0, 0.25}}) {
    const SystemSpec sys = make_exponential_system(d, L);
    const UniformResult u = algorithm_uniform(sys, eps);
    const SigmaCurves curves = metric_sigma(u.record, sys.lipschitz(), sys.bound());
    const std::size_t mid = u.disc.n() / 2;
    CHECK(curves.error[mid] > curves.cost[mid]);
  }
}

TEST_CASE("single-interval sigma") {
  const double e = std::exp(1.0);
  const SystemSpec sys = make_exponential_system(1, 1.0);
  const RunRecord run = euler_run(sys, Discretization::initial(1.0, 1.0, e));
  const SigmaCurves curves = metric_sigma(run, 1.0, e);
  const double E0 = e * e, E1 = (e - 1.0) * 3.0 * e;
  CHECK(curves.error[0] == doctest::Approx(E0 / (E0 + E1)).epsilon(1e-14));
  CHECK(curves.error[1] == 1.0);
}

TEST_CASE("estimator error") {
  const SystemSpec sys = make_exponential_system(1, 1.0);
  const RunRecord run = euler_run(sys, Discretization::initial(1.0, 1.0, std::exp(1.0)));
  REQUIRE(run.cost_exact.size() == 1);

  // Splines reproducing the record give a perfect estimator.
  CHECK(metric_delta_cost(run, VolumeSplines::from_record(run), 1, 1) == 0.0);

  // Doubling v_R doubles the single predicted step cost: delta_C = 1.
  std::vector<double> vR = run.vhat_R;
  for (double& v : vR) v *= 2.0;
  const VolumeSplines doubled({0.0, 1.0}, vR, run.vhat_F);
  CHECK(metric_delta_cost(run, doubled, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("estimator error shrinks along an adaptive trace") {
  for (double L : {1.0, 2.0}) {
    const SystemSpec sys = make_exponential_system(1, L);
    const AdaptiveResult result = algorithm_adaptive(sys, default_ladder(sys, L == 1.0 ? 0.25 : 2.0));
    const auto& th = result.trace.thresholds;
    CHECK(*th.back().delta_cost_error < *th[1].delta_cost_error);
  }
}
