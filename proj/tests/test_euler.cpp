#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "reach/errors.hpp"
#include "reach/euler.hpp"

using namespace reach;

namespace {

// Plain set-based Euler recursion for the 1d exponential system. `slack`
// widens the projection ball relatively, bracketing exact boundary ties.
struct OracleRun {
  std::vector<std::set<long>> sets;
  std::vector<unsigned long> cost;
};

OracleRun oracle_euler_1d(double L, const Discretization& disc, double slack) {
  OracleRun run;
  auto project = [slack](double lo, double hi, double rho, std::set<long>& out) {
    const double r = rho / 2 * (1.0 + slack);
    const long a = static_cast<long>(std::ceil((lo - r) / rho));
    const long b = static_cast<long>(std::floor((hi + r) / rho));
    for (long z = a; z <= b; ++z) out.insert(z);
    return static_cast<unsigned long>(b - a + 1);
  };
  std::set<long> current;
  project(1.0, 1.0, disc.resolution(0), current);
  run.sets.push_back(current);
  for (std::size_t k = 1; k <= disc.n(); ++k) {
    std::set<long> next;
    unsigned long cost = 0;
    const double h = disc.step(k), rho = disc.resolution(k);
    for (long z : current) {
      const double x = disc.resolution(k - 1) * static_cast<double>(z);
      const double lo = x + h * std::min(0.9 * L * x, L * x);
      const double hi = x + h * std::max(0.9 * L * x, L * x);
      cost += project(lo, hi, rho, next);
    }
    run.cost.push_back(cost);
    run.sets.push_back(next);
    current = next;
  }
  return run;
}

SystemSpec frozen_system() {
  return SystemSpec("frozen", SystemKind::custom, 1, 1.0, 0.0, 0.0, Box({2.0}, {2.0}),
                    [](std::span<const double>, std::span<double> lo, std::span<double> hi) {
                      lo[0] = 0.0;
                      hi[0] = 0.0;
                    },
                    1, 1);
}

}  // namespace

TEST_CASE("single-interval run of the exponential system") {
  const double e = std::exp(1.0);
  const SystemSpec sys = make_exponential_system(1, 1.0);
  const RunRecord run = euler_run(sys, Discretization::initial(1.0, 1.0, e));
  REQUIRE(run.sets.size() == 2);
  CHECK(std::vector<std::int64_t>(run.sets[0].flat().begin(), run.sets[0].flat().end()) ==
        std::vector<std::int64_t>{0});
  CHECK(run.set_sizes == std::vector<std::uint64_t>{1, 1});
  CHECK(run.cost_exact == std::vector<std::uint64_t>{1});
}

TEST_CASE("one step from a grid point") {
  // X0 = {1} on the unit grid, then h = 0.5 onto rho = 0.5: the image
  // [1.45, 1.5] inflated to [1.2, 1.75] holds only the lattice point 1.5.
  const SystemSpec sys = make_exponential_system(1, 1.0);
  const Discretization disc = Discretization::from_arrays({0.5, 0.5}, {1.0, 0.5, 0.5});
  const RunRecord run = euler_run(sys, disc);
  CHECK(std::vector<std::int64_t>(run.sets[0].flat().begin(), run.sets[0].flat().end()) ==
        std::vector<std::int64_t>{1});
  CHECK(std::vector<std::int64_t>(run.sets[1].flat().begin(), run.sets[1].flat().end()) ==
        std::vector<std::int64_t>{3});
  CHECK(run.cost_exact[0] == 1);
}

TEST_CASE("frozen dynamics keep the initial set") {
  const RunRecord run = euler_run(frozen_system(), Discretization::uniform(1.0, 5));
  for (const LatticeSet& s : run.sets) CHECK(s == run.sets[0]);
  CHECK(run.sets[0].size() == 1);
}

TEST_CASE("sets and costs match the plain recursion") {
  for (double L : {1.0, 2.0}) {
    const SystemSpec sys = make_exponential_system(1, L);
    const Discretization disc = Discretization::uniform(1.0, 11);
    const RunRecord run = euler_run(sys, disc);
    // Closed-ball ties: the library result lies between a slightly shrunken
    // and a slightly widened recursion.
    const OracleRun tight = oracle_euler_1d(L, disc, -1e-9);
    const OracleRun loose = oracle_euler_1d(L, disc, 1e-9);
    for (std::size_t k = 0; k <= disc.n(); ++k) {
      std::set<long> got;
      for (std::size_t i = 0; i < run.sets[k].size(); ++i) got.insert(run.sets[k].index(i)[0]);
      CHECK(std::includes(got.begin(), got.end(), tight.sets[k].begin(), tight.sets[k].end()));
      CHECK(std::includes(loose.sets[k].begin(), loose.sets[k].end(), got.begin(), got.end()));
    }
    for (std::size_t j = 0; j < disc.n(); ++j) {
      CHECK(run.cost_exact[j] >= tight.cost[j]);
      CHECK(run.cost_exact[j] <= loose.cost[j]);
    }
  }
}

TEST_CASE("run record invariants") {
  const SystemSpec sys = make_michaelis_menten();
  Discretization disc = Discretization::initial(1.0, sys.lipschitz(), sys.bound());
  for (int s = 0; s < 12; ++s) disc = disc.subdivide(disc.n());
  const RunRecord run = euler_run(sys, disc);
  REQUIRE(run.sets.size() == disc.n() + 1);
  REQUIRE(run.cost_exact.size() == disc.n());
  for (std::size_t j = 0; j <= disc.n(); ++j) {
    CHECK(run.set_sizes[j] == run.sets[j].size());
    CHECK(run.vhat_R[j] ==
          static_cast<double>(run.set_sizes[j]) * disc.resolution(j) * disc.resolution(j));
    CHECK(run.vhat_R[j] > 0.0);
    CHECK(run.vhat_F[j] > 0.0);
    if (j < disc.n()) CHECK(run.cost_exact[j] >= run.set_sizes[j]);
  }
  CHECK(run.vhat_F[disc.n()] == run.vhat_F[disc.n() - 1]);
  double total = 0.0;
  for (auto c : run.cost_exact) total += static_cast<double>(c);
  CHECK(run.total_cost() == total);
}

TEST_CASE("worker count does not change results") {
  const SystemSpec sys = make_exponential_system(2, 1.0);
  const Discretization disc = Discretization::uniform(1.0, 23);
  EulerOptions one, many;
  many.workers = 3;
  const RunRecord a = euler_run(sys, disc, one);
  const RunRecord b = euler_run(sys, disc, many);
  CHECK(a.sets == b.sets);
  CHECK(a.cost_exact == b.cost_exact);
  CHECK(a.vhat_F == b.vhat_F);
}

TEST_CASE("keeping only the final set") {
  const SystemSpec sys = make_exponential_system(1, 1.0);
  const Discretization disc = Discretization::uniform(1.0, 6);
  EulerOptions options;
  options.keep_sets = false;
  const RunRecord slim = euler_run(sys, disc, options);
  const RunRecord full = euler_run(sys, disc);
  REQUIRE(slim.sets.size() == 1);
  CHECK(slim.final_set() == full.final_set());
  CHECK(slim.set_sizes == full.set_sizes);
}

TEST_CASE("cardinality cap") {
  const SystemSpec sys = make_exponential_system(2, 4.0);
  EulerOptions options;
  options.cardinality_cap = 100000;
  try {
    euler_run(sys, Discretization::uniform(1.0, 200), options);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.projected_cost() > 100000.0);
  }
  CHECK_THROWS_AS(euler_run(sys, Discretization::uniform(2.0, 4)), InputError);
}

TEST_CASE("summary and step table") {
  const SystemSpec sys = make_exponential_system(1, 1.0);
  const RunRecord run = euler_run(sys, Discretization::from_arrays({0.5, 0.5}, {1.0, 0.5, 0.5}));
  std::ostringstream steps;
  write_steps_csv(steps, run);
  const std::string text = steps.str();
  CHECK(text.rfind("j,t_j,h_j,rho_j,set_size,cost_exact,vhat_R,vhat_F\n", 0) == 0);
  CHECK(text.find("\n0,0,,1,1,1,1,") != std::string::npos);
  std::ostringstream summary;
  write_summary(summary, run);
  CHECK(summary.str().rfind("n 2 E ", 0) == 0);
}
