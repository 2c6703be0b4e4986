#include "reach/refine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "reach/metrics.hpp"

namespace reach {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Safety net for the refinement loop; the loop provably terminates long before.
constexpr std::size_t kMaxRefinements = 50'000'000;

}  // namespace

VolumeSplines::VolumeSplines(std::vector<double> nodes, std::vector<double> vR,
                             std::vector<double> vF)
    : nodes_(std::move(nodes)), vR_(std::move(vR)), vF_(std::move(vF)) {
  if (nodes_.size() < 2 || vR_.size() != nodes_.size() || vF_.size() != nodes_.size()) {
    throw InputError("volume splines need matching node and value arrays with at least two nodes");
  }
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (j > 0 && !(nodes_[j] > nodes_[j - 1])) throw InputError("spline nodes must increase");
    if (!(vR_[j] > 0.0) || !(vF_[j] > 0.0)) throw InputError("surrogate volumes must be positive");
  }
}

VolumeSplines VolumeSplines::from_record(const RunRecord& record) {
  const auto t = record.disc.nodes();
  return VolumeSplines(std::vector<double>(t.begin(), t.end()), record.vhat_R, record.vhat_F);
}

double VolumeSplines::interpolate(const std::vector<double>& values, double t) const {
  if (t <= nodes_.front()) return values.front();
  if (t >= nodes_.back()) return values.back();
  const auto upper = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  const auto j = static_cast<std::size_t>(upper - nodes_.begin());
  // nodes_[j-1] <= t < nodes_[j]
  if (t == nodes_[j - 1]) return values[j - 1];
  const double w = (t - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

double cost_component(const Discretization& disc, const VolumeSplines& splines, int d_R, int d_F,
                      std::size_t j) {
  if (j >= disc.n()) throw InputError("cost_component: index outside [0, n-1]");
  const double t = disc.node(j);
  return splines.volume_R(t) / ipow(disc.resolution(j), d_R) *
         (splines.volume_F(t) * ipow(disc.step(j + 1), d_F) / ipow(disc.resolution(j + 1), d_F));
}

double cost_estimate(const Discretization& disc, const VolumeSplines& splines, int d_R, int d_F) {
  double total = 0.0;
  for (std::size_t j = 0; j < disc.n(); ++j) total += cost_component(disc, splines, d_R, d_F, j);
  return total;
}

double delta_cost(const Discretization& disc, const VolumeSplines& splines, int d_R, int d_F,
                  std::size_t k) {
  const std::size_t n = disc.n();
  if (k > n) throw InputError("delta_cost: index outside [0, n]");
  const double grow_R = ipow(4.0, d_R) - 1.0;
  const double grow_F = ipow(2.0, d_F) - 1.0;
  if (k == 0) {
    return splines.product(0.0) * grow_R / ipow(disc.resolution(0), d_R) *
           ipow(disc.step(1) / disc.resolution(1), d_F);
  }
  const double h = disc.step(k);
  const double rho = disc.resolution(k);
  // New node in the middle of the halved interval.
  double delta = splines.product(disc.node(k) - h / 2.0) * ipow(2.0 * h / rho, d_F) *
                 ipow(4.0 / rho, d_R);
  // The step leaving t_{k-1} becomes half as long onto a four times finer grid.
  delta += splines.product(disc.node(k - 1)) * grow_F / ipow(disc.resolution(k - 1), d_R) *
           ipow(h / rho, d_F);
  if (k < n) {
    // The step leaving t_k now starts from a four times finer grid.
    delta += splines.product(disc.node(k)) * grow_R / ipow(rho, d_R) *
             ipow(disc.step(k + 1) / disc.resolution(k + 1), d_F);
  }
  return delta;
}

std::size_t greedy_select(const Discretization& disc, double L, double P,
                          const VolumeSplines& splines, int d_R, int d_F) {
  if (!disc.satisfies_coupling(L, P)) {
    throw PreconditionError("greedy_select: resolutions are not coupled as rho_j = 2 L P h_j^2");
  }
  std::size_t best = 0;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= disc.n(); ++j) {
    const double ratio = -detail::delta_error_unchecked(disc, L, P, j) /
                         delta_cost(disc, splines, d_R, d_F, j);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = j;
    }
  }
  return best;
}

std::size_t uniform_step_count(double eps, double L, double P, double T) {
  if (!(eps > 0.0)) throw InputError("uniform_step_count: eps must be positive");
  const double growth = std::expm1(L * T);
  const double b = growth * (P * T + T / (2.0 * L));
  const double c = T * T * (growth + 0.5);
  auto feasible = [&](double m) { return m * m * eps - m * b - c >= 0.0; };
  const double root = (b + std::sqrt(b * b + 4.0 * eps * c)) / (2.0 * eps);
  if (!(root < 1e15)) throw InputError("uniform_step_count: tolerance too small");
  double m = std::max(1.0, std::ceil(root));
  while (m > 1.0 && feasible(m - 1.0)) m -= 1.0;
  while (!feasible(m)) m += 1.0;
  return static_cast<std::size_t>(m);
}

UniformResult algorithm_uniform(const SystemSpec& system, double eps, const EulerOptions& options) {
  const double T = system.horizon();
  const std::size_t n = uniform_step_count(eps, system.lipschitz(), system.bound(), T);
  Discretization disc = Discretization::uniform(T, n);
  RunRecord record = euler_run(system, disc, options);
  return {std::move(disc), std::move(record)};
}

std::vector<double> default_ladder(const SystemSpec& system, double eps_target) {
  if (!(eps_target > 0.0)) throw InputError("default_ladder: target must be positive");
  const double L = system.lipschitz();
  const double P = system.bound();
  const double start = error_total(Discretization::initial(system.horizon(), L, P), L, P);
  int top = 0;
  while (std::ldexp(eps_target, top + 1) < start) ++top;
  std::vector<double> ladder;
  for (int k = top; k >= 0; --k) ladder.push_back(std::ldexp(eps_target, k));
  return ladder;
}

AdaptiveResult algorithm_adaptive(const SystemSpec& system, std::span<const double> ladder,
                                  const EulerOptions& options) {
  if (ladder.empty()) throw InputError("algorithm_adaptive: empty threshold ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0)) throw InputError("algorithm_adaptive: thresholds must be positive");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) {
      throw InputError("algorithm_adaptive: thresholds must be strictly decreasing");
    }
  }
  const double L = system.lipschitz();
  const double P = system.bound();
  const int d_R = system.d_R();
  const int d_F = system.d_F();

  EulerOptions run_options = options;
  run_options.keep_sets = false;

  Discretization disc = Discretization::initial(system.horizon(), L, P);
  double error = error_total(disc, L, P);
  RefinementTrace trace;
  std::optional<VolumeSplines> splines;
  std::optional<RunRecord> last;
  double cumulative = 0.0;
  std::size_t m = 0;
  auto planning_started = Clock::now();

  // Level 0 is the unconditional first run; levels 1..size index the ladder.
  for (std::size_t level = 0; level <= ladder.size();) {
    const bool run_now = level == 0 || error <= ladder[level - 1];
    if (run_now) {
      const double refine_seconds = seconds_since(planning_started);
      const bool final_run = level == ladder.size();
      RunRecord record = [&] {
        try {
          return euler_run(system, disc, final_run ? options : run_options);
        } catch (const ResourceError& e) {
          throw AdaptiveResourceError(e, trace);
        }
      }();
      cumulative += record.total_cost();

      RunRecord kept = record;
      kept.sets.clear();
      trace.thresholds.push_back(ThresholdRecord{
          .level = level,
          .threshold = level == 0 ? std::numeric_limits<double>::quiet_NaN() : ladder[level - 1],
          .error_bound = record.error_bound,
          .n = disc.n(),
          .cost_final = record.total_cost(),
          .cost_cumulative = cumulative,
          .delta_cost_error = splines ? std::optional<double>(metric_delta_cost(record, *splines, d_R, d_F))
                                      : std::nullopt,
          .reach_seconds = record.wall_time,
          .refine_seconds = refine_seconds,
          .record = std::move(kept),
      });

      splines = VolumeSplines::from_record(record);
      last = std::move(record);
      ++level;
      planning_started = Clock::now();
      continue;
    }

    if (m >= kMaxRefinements) throw InvariantViolation("algorithm_adaptive: refinement did not terminate");
    const std::size_t k = greedy_select(disc, L, P, *splines, d_R, d_F);
    const double dE = detail::delta_error_unchecked(disc, L, P, k);
    const double dC = delta_cost(disc, *splines, d_R, d_F, k);
    disc = disc.subdivide(k);
    const double next_error = error_total(disc, L, P);
    if (!(next_error < error)) {
      throw InvariantViolation("algorithm_adaptive: error bound failed to decrease");
    }
    error = next_error;
    trace.iterations.push_back({m, k, disc.n(), dE, dC, -dE / dC, error});
    ++m;
  }
  return {last->disc, std::move(*last), std::move(trace)};
}

void write_iterations_csv(std::ostream& os, const RefinementTrace& trace) {
  const auto precision = os.precision(17);
  os << "m,k_m,n_m,delta_E,delta_C,ratio,E\n";
  for (const IterationRecord& it : trace.iterations) {
    os << it.m << ',' << it.chosen << ',' << it.n_after << ',' << it.delta_error << ','
       << it.delta_cost << ',' << it.ratio << ',' << it.error_after << '\n';
  }
  os.precision(precision);
}

void write_thresholds_csv(std::ostream& os, const RefinementTrace& trace) {
  const auto precision = os.precision(17);
  os << "level,eps,E,n,cost_final,cost_cumulative,delta_C\n";
  for (const ThresholdRecord& th : trace.thresholds) {
    os << th.level << ',';
    if (th.level > 0) os << th.threshold;
    os << ',' << th.error_bound << ',' << th.n << ',' << th.cost_final << ','
       << th.cost_cumulative << ',';
    if (th.delta_cost_error) os << *th.delta_cost_error;
    os << '\n';
  }
  os.precision(precision);
}

void write_timing_csv(std::ostream& os, const RefinementTrace& trace) {
  const auto precision = os.precision(6);
  os << "level,eps,reach_seconds,refine_seconds\n";
  for (const ThresholdRecord& th : trace.thresholds) {
    os << th.level << ',';
    if (th.level > 0) os << th.threshold;
    os << ',' << th.reach_seconds << ',' << th.refine_seconds << '\n';
  }
  os.precision(precision);
}

}  // namespace reach
