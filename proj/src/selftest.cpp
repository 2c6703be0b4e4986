#include "reach/selftest.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "reach/refine.hpp"

namespace reach {

namespace {

void record(SuiteResult& result, bool passed, const std::string& what) {
  ++result.checks;
  if (passed) return;
  if (result.failures++ == 0) result.first_failure = what;
}

VolumeSplines random_splines(std::mt19937_64& rng, double T) {
  std::uniform_int_distribution<int> count(2, 9);
  std::uniform_real_distribution<double> value(0.05, 20.0);
  const int nodes = count(rng);
  std::vector<double> t(nodes), vR(nodes), vF(nodes);
  for (int i = 0; i < nodes; ++i) {
    t[i] = T * i / (nodes - 1);
    vR[i] = value(rng);
    vF[i] = value(rng);
  }
  return VolumeSplines(std::move(t), std::move(vR), std::move(vF));
}

}  // namespace

SuiteResult selftest_deltas(std::uint64_t seed, std::size_t cases) {
  SuiteResult result;
  result.name = "closed-form deltas";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> depth(0, 40);
  std::uniform_int_distribution<int> dim(0, 3);
  for (std::size_t c = 0; c < cases; ++c) {
    const double T = 0.5 + 1.5 * unit(rng);
    const double L = 0.25 + 3.0 * unit(rng);
    const double P = 0.1 + 5.0 * unit(rng);
    const int d_R = dim(rng);
    const int d_F = dim(rng);
    Discretization disc = Discretization::initial(T, L, P);
    for (int s = depth(rng); s > 0; --s) {
      std::uniform_int_distribution<std::size_t> pick(0, disc.n());
      disc = disc.subdivide(pick(rng));
    }
    const VolumeSplines splines = random_splines(rng, T);
    const double E = error_total(disc, L, P);
    const double C = cost_estimate(disc, splines, d_R, d_F);
    for (std::size_t k = 0; k <= disc.n(); ++k) {
      const Discretization refined = disc.subdivide(k);
      const double dE = delta_error(disc, L, P, k);
      const double dC = delta_cost(disc, splines, d_R, d_F, k);
      const double dE_direct = error_total(refined, L, P) - E;
      const double dC_direct = cost_estimate(refined, splines, d_R, d_F) - C;
      std::ostringstream where;
      where.precision(17);
      where << "case " << c << " n " << disc.n() << " k " << k;
      record(result, std::abs(dE - dE_direct) <= 1e-10 * std::abs(E),
             where.str() + ": delta_error " + std::to_string(dE) + " vs " + std::to_string(dE_direct));
      record(result, std::abs(dC - dC_direct) <= 1e-10 * std::abs(C),
             where.str() + ": delta_cost " + std::to_string(dC) + " vs " + std::to_string(dC_direct));
      record(result, dE <= -0.5 * error_component(disc, L, P, k),
             where.str() + ": delta_error above -E_k/2");
    }
  }
  return result;
}

SuiteResult selftest_projection(std::uint64_t seed, std::size_t cases) {
  SuiteResult result;
  result.name = "projection";
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> centre(-5.0, 5.0);
  std::uniform_real_distribution<double> width(0.0, 2.0);
  std::uniform_real_distribution<double> log_rho(std::log(0.02), std::log(1.5));
  std::uniform_int_distribution<int> dim(1, 3);
  for (std::size_t c = 0; c < cases; ++c) {
    const int d = dim(rng);
    std::vector<double> lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = centre(rng);
      // Every fourth box is degenerate along this axis.
      hi[i] = (c % 4 == 0 && i == 0) ? lo[i] : lo[i] + width(rng);
    }
    const Box box(lo, hi);
    const double rho = std::exp(log_rho(rng));
    const LatticeSet set = project_box(box, rho);
    const std::string where = "case " + std::to_string(c);
    record(result, !set.empty(), where + ": empty projection");
    if (!set.empty()) {
      const double dist = hausdorff_to_box(set, box);
      record(result, dist <= rho / 2.0 + 1e-12,
             where + ": distance " + std::to_string(dist) + " exceeds rho/2 " + std::to_string(rho / 2));
    }
  }
  return result;
}

SuiteResult selftest_structure() {
  SuiteResult result;
  result.name = "adaptive structure";
  struct Case {
    SystemSpec system;
    double eps;
  };
  std::vector<Case> cases;
  cases.push_back({make_exponential_system(1, 1.0), 0.125});
  cases.push_back({make_exponential_system(1, 2.0), 1.0});
  cases.push_back({make_exponential_system(2, 1.0), 0.25});
  cases.push_back({make_exponential_system(2, 2.0), 2.0});
  cases.push_back({make_michaelis_menten(), 0.25});
  for (const Case& c : cases) {
    const double L = c.system.lipschitz();
    const double P = c.system.bound();
    const std::string where = c.system.name() + " d=" + std::to_string(c.system.dimension()) +
                              " L=" + std::to_string(L);
    const std::vector<double> ladder = default_ladder(c.system, c.eps);
    std::optional<AdaptiveResult> run;
    try {
      EulerOptions options;
      options.keep_sets = false;
      run.emplace(algorithm_adaptive(c.system, ladder, options));
    } catch (const InvariantViolation& e) {
      record(result, false, where + ": " + e.what());
      continue;
    }
    record(result, run->record.error_bound <= c.eps, where + ": final E above target");
    for (const ThresholdRecord& th : run->trace.thresholds) {
      const ConformanceReport report = th.record.disc.conformance(L, P);
      record(result, report.ok(), where + ": nonconforming discretization at level " +
                                      std::to_string(th.level));
    }
    double previous = error_total(Discretization::initial(c.system.horizon(), L, P), L, P);
    for (const IterationRecord& it : run->trace.iterations) {
      record(result, it.error_after < previous,
             where + ": E not decreasing at iteration " + std::to_string(it.m));
      previous = it.error_after;
    }
  }
  return result;
}

std::vector<SuiteResult> run_selftests(std::uint64_t seed) {
  return {selftest_deltas(seed), selftest_projection(seed), selftest_structure()};
}

}  // namespace reach
