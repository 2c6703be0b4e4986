#include "reach/discretization.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "reach/errors.hpp"

namespace reach {

namespace {

// Ticks are integer multiples of T 2^-kTickLevel. 52 keeps every tick count
// exactly representable as a double.
constexpr int kTickLevel = 52;
constexpr std::uint64_t kFullTicks = std::uint64_t{1} << kTickLevel;

double ulp_at(double x) {
  const double ax = std::abs(x);
  return std::nextafter(ax, std::numeric_limits<double>::infinity()) - ax;
}

void write_array(std::ostream& os, const char* label, std::span<const double> values) {
  os << label;
  for (double v : values) os << ' ' << v;
  os << '\n';
}

}  // namespace

Discretization Discretization::initial(double T, double L, double P) {
  if (!(T > 0.0)) throw InputError("initial_discretization: T must be positive");
  if (!(L > 0.0) || !(P > 0.0)) throw InputError("initial_discretization: L and P must be positive");
  const double base = 2.0 * L * P * T * T;
  Discretization disc;
  disc.h_ = {T};
  disc.t_ = {0.0, T};
  disc.rho_ = {base, base};
  DyadicLevels levels;
  levels.rho_base = base;
  levels.h_level = {0};
  levels.rho_level = {0, 0};
  levels.t_ticks = {0, kFullTicks};
  disc.dyadic_ = std::move(levels);
  return disc;
}

Discretization Discretization::uniform(double T, std::size_t n) {
  if (!(T > 0.0)) throw InputError("uniform discretization: T must be positive");
  if (n == 0) throw InputError("uniform discretization: n must be positive");
  const double nd = static_cast<double>(n);
  const double rho = (T * T) / (nd * nd);
  Discretization disc;
  disc.h_.assign(n, T / nd);
  disc.t_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) disc.t_[k] = static_cast<double>(k) * T / nd;
  disc.t_[n] = T;
  disc.rho_.assign(n + 1, rho);
  return disc;
}

Discretization Discretization::from_arrays(std::vector<double> h, std::vector<double> rho) {
  if (h.empty()) throw InputError("discretization needs at least one step");
  if (rho.size() != h.size() + 1) throw InputError("rho must have n+1 entries");
  for (double v : h) {
    if (!(v > 0.0)) throw InputError("step sizes must be positive");
  }
  for (double v : rho) {
    if (!(v > 0.0)) throw InputError("resolutions must be positive");
  }
  Discretization disc;
  disc.t_.resize(h.size() + 1, 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) disc.t_[j + 1] = disc.t_[j] + h[j];
  disc.h_ = std::move(h);
  disc.rho_ = std::move(rho);
  return disc;
}

double Discretization::step(std::size_t j) const {
  if (j < 1 || j > n()) throw InputError("step index outside [1, n]");
  return h_[j - 1];
}

double Discretization::node(std::size_t j) const {
  if (j > n()) throw InputError("node index outside [0, n]");
  return t_[j];
}

double Discretization::resolution(std::size_t j) const {
  if (j > n()) throw InputError("resolution index outside [0, n]");
  return rho_[j];
}

Discretization Discretization::subdivide(std::size_t j) const {
  if (j > n()) throw InputError("subdivide: index outside [0, n]");
  Discretization out = *this;
  if (j == 0) {
    out.rho_[0] = rho_[0] / 4.0;
    if (out.dyadic_) out.dyadic_->rho_level[0] += 1;
    return out;
  }

  const double half = h_[j - 1] / 2.0;
  const double quarter = rho_[j] / 4.0;
  out.h_[j - 1] = half;
  out.h_.insert(out.h_.begin() + static_cast<std::ptrdiff_t>(j), half);
  out.rho_[j] = quarter;
  out.rho_.insert(out.rho_.begin() + static_cast<std::ptrdiff_t>(j), quarter);

  double midpoint = t_[j] - half;
  if (out.dyadic_) {
    DyadicLevels& lv = *out.dyadic_;
    const int level = lv.h_level[j - 1] + 1;
    if (level > kTickLevel) throw InputError("subdivide: step below T 2^-52 cannot be tracked");
    lv.h_level[j - 1] = level;
    lv.h_level.insert(lv.h_level.begin() + static_cast<std::ptrdiff_t>(j), level);
    lv.rho_level[j] += 1;
    lv.rho_level.insert(lv.rho_level.begin() + static_cast<std::ptrdiff_t>(j), lv.rho_level[j]);
    const std::uint64_t ticks = lv.t_ticks[j] - (std::uint64_t{1} << (kTickLevel - level));
    lv.t_ticks.insert(lv.t_ticks.begin() + static_cast<std::ptrdiff_t>(j), ticks);
    midpoint = horizon() * std::ldexp(static_cast<double>(ticks), -kTickLevel);
  }
  out.t_.insert(out.t_.begin() + static_cast<std::ptrdiff_t>(j), midpoint);
  return out;
}

bool Discretization::satisfies_coupling(double L, double P) const {
  if (dyadic_) {
    const DyadicLevels& lv = *dyadic_;
    const double base = 2.0 * L * P * horizon() * horizon();
    if (std::abs(base - lv.rho_base) > 1e-12 * lv.rho_base) return false;
    for (std::size_t j = 1; j <= n(); ++j) {
      if (lv.rho_level[j] != lv.h_level[j - 1]) return false;
      if (rho_[j] != std::ldexp(lv.rho_base, -2 * lv.rho_level[j])) return false;
    }
    return true;
  }
  for (std::size_t j = 1; j <= n(); ++j) {
    const double expected = 2.0 * L * P * h_[j - 1] * h_[j - 1];
    if (std::abs(rho_[j] - expected) > 1e-12 * expected) return false;
  }
  return true;
}

ConformanceReport Discretization::conformance(double L, double P) const {
  ConformanceReport report;
  const double T = horizon();

  double sum = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k <= n(); ++k) {
    sum += h_[k - 1];
    worst = std::max(worst, std::abs(t_[k] - sum) / ulp_at(t_[k]));
  }
  report.max_sum_drift_ulps = worst;
  report.nodes_are_cumulative_sums = t_[0] == 0.0 && worst <= static_cast<double>(n());

  report.coupling_exact = satisfies_coupling(L, P);

  if (dyadic_) {
    const DyadicLevels& lv = *dyadic_;
    bool dyadic_ok = lv.h_level.size() == n() && lv.t_ticks.size() == n() + 1 && lv.t_ticks[0] == 0;
    bool aligned = dyadic_ok;
    for (std::size_t j = 1; dyadic_ok && j <= n(); ++j) {
      const int level = lv.h_level[j - 1];
      const std::uint64_t step_ticks = std::uint64_t{1} << (kTickLevel - level);
      dyadic_ok = dyadic_ok && h_[j - 1] == std::ldexp(T, -level) &&
                  lv.t_ticks[j] - lv.t_ticks[j - 1] == step_ticks;
      aligned = aligned && lv.t_ticks[j] % step_ticks == 0 &&
                t_[j] == T * std::ldexp(static_cast<double>(lv.t_ticks[j]), -kTickLevel);
    }
    report.steps_dyadic = dyadic_ok && lv.t_ticks[n()] == kFullTicks;
    report.nodes_grid_aligned = aligned;
  } else {
    bool dyadic_ok = true;
    bool aligned = true;
    for (std::size_t j = 1; j <= n(); ++j) {
      int exponent = 0;
      const double mantissa = std::frexp(h_[j - 1] / T, &exponent);
      dyadic_ok = dyadic_ok && mantissa == 0.5 && exponent <= 1;
      const double multiple = t_[j] / h_[j - 1];
      aligned = aligned && multiple == std::round(multiple);
    }
    report.steps_dyadic = dyadic_ok;
    report.nodes_grid_aligned = aligned;
  }
  return report;
}

void Discretization::write_text(std::ostream& os) const {
  const auto precision = os.precision(17);
  os << "n " << n() << '\n';
  write_array(os, "h", h_);
  write_array(os, "t", t_);
  write_array(os, "rho", rho_);
  os.precision(precision);
}

}  // namespace reach
