#include "reach/systems.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "reach/errors.hpp"

namespace reach {

Box::Box(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw InputError("box bounds must have equal, nonzero length");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw InputError("box lower bound exceeds upper bound");
    }
  }
}

Box Box::point(std::span<const double> x) {
  return Box(std::vector<double>(x.begin(), x.end()), std::vector<double>(x.begin(), x.end()));
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != dimension()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

double hausdorff_boxes(const Box& a, const Box& b) {
  if (a.dimension() != b.dimension()) throw InputError("box dimension mismatch");
  // For products of intervals the max-norm Hausdorff distance is the largest
  // per-axis interval distance max(|a_lo - b_lo|, |a_hi - b_hi|).
  double dist = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    dist = std::max({dist, std::abs(a.lower[i] - b.lower[i]), std::abs(a.upper[i] - b.upper[i])});
  }
  return dist;
}

SystemSpec::SystemSpec(std::string name, SystemKind kind, std::size_t dimension, double horizon,
                       double lipschitz, double bound, Box initial_set, RhsFunction rhs, int d_R,
                       int d_F, double constant_floor)
    : name_(std::move(name)),
      kind_(kind),
      dimension_(dimension),
      horizon_(horizon),
      lipschitz_(std::max(lipschitz, constant_floor)),
      bound_(std::max(bound, constant_floor)),
      initial_set_(std::move(initial_set)),
      rhs_(std::move(rhs)),
      d_R_(d_R),
      d_F_(d_F) {
  if (dimension_ == 0) throw InputError("system dimension must be positive");
  if (!(horizon_ > 0.0)) throw InputError("horizon must be positive");
  if (lipschitz < 0.0) throw InputError("Lipschitz constant must be nonnegative");
  if (!(constant_floor > 0.0)) throw InputError("constant floor must be positive");
  if (initial_set_.dimension() != dimension_) throw InputError("initial set dimension mismatch");
  if (!rhs_) throw InputError("right-hand side is empty");
  const int d = static_cast<int>(dimension_);
  if (d_R_ < 1 || d_R_ > d) throw InputError("d_R must lie in [1, d]");
  if (d_F_ < 0 || d_F_ > d) throw InputError("d_F must lie in [0, d]");
}

double SystemSpec::exponential_rate() const {
  if (kind_ != SystemKind::exponential) {
    throw UnsupportedOperation("exponential_rate: not an exponential benchmark system");
  }
  return rate_;
}

Box SystemSpec::evaluate_rhs(std::span<const double> x) const {
  if (x.size() != dimension_) throw InputError("evaluate_rhs: state has wrong dimension");
  std::vector<double> lo(dimension_), hi(dimension_);
  rhs_(x, lo, hi);
  return Box(std::move(lo), std::move(hi));
}

SystemSpec SystemSpec::with_effective_dimensions(int d_R, int d_F) const {
  SystemSpec copy = *this;
  const int d = static_cast<int>(dimension_);
  if (d_R < 1 || d_R > d) throw InputError("d_R must lie in [1, d]");
  if (d_F < 0 || d_F > d) throw InputError("d_F must lie in [0, d]");
  copy.d_R_ = d_R;
  copy.d_F_ = d_F;
  return copy;
}

SystemSpec make_exponential_system(std::size_t d, double L, double constant_floor) {
  if (d == 0) throw InputError("dimension must be positive");
  if (L < 0.0) throw InputError("L must be nonnegative");
  auto rhs = [L](std::span<const double> x, std::span<double> lo, std::span<double> hi) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = 0.9 * L * x[i];
      const double b = L * x[i];
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b);
    }
  };
  const std::vector<double> ones(d, 1.0);
  const int di = static_cast<int>(d);
  SystemSpec spec("exponential", SystemKind::exponential, d, 1.0, L, L * std::exp(L),
                  Box::point(ones), rhs, di, di, constant_floor);
  spec.rate_ = L;
  return spec;
}

SystemSpec make_michaelis_menten() {
  const MichaelisMentenParameters p;
  auto rhs = [p](std::span<const double> x, std::span<double> lo, std::span<double> hi) {
    const double x1 = x[0];
    const double x2 = x[1];
    const double binding = p.k1 * p.e0 * x1;
    const double release = (p.k1 * x1 + p.k_minus1) * x2;
    lo[0] = hi[0] = -binding + release;
    // k2 * x2 with k2 in [k2-, k2+], sign-aware in x2.
    const double a = p.k2_lower * x2;
    const double b = p.k2_upper * x2;
    const double base = binding - release;
    lo[1] = base - std::max(a, b);
    hi[1] = base - std::min(a, b);
  };
  const std::vector<double> x0{0.75, 0.25};
  return SystemSpec("michaelis-menten", SystemKind::michaelis_menten, 2, 1.0, 3.0, 0.61,
                    Box::point(x0), rhs, 2, 1);
}

Box exact_reachable_box(const SystemSpec& system, double t) {
  if (system.kind() != SystemKind::exponential) {
    throw UnsupportedOperation("exact reachable sets are only known for the exponential system");
  }
  if (t < 0.0 || t > system.horizon()) throw InputError("time outside [0, T]");
  const double L = system.exponential_rate();
  const std::size_t d = system.dimension();
  return Box(std::vector<double>(d, std::exp(0.9 * L * t)), std::vector<double>(d, std::exp(L * t)));
}

}  // namespace reach
