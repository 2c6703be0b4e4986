#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace reach {

/// Axis-aligned box [lower, upper] in R^d. Point boxes are allowed.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi);

  static Box point(std::span<const double> x);

  std::size_t dimension() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x) const;
  bool operator==(const Box&) const = default;
};

/// Max-norm Hausdorff distance between two boxes of equal dimension.
double hausdorff_boxes(const Box& a, const Box& b);

/// Writes the interval hull of F(x) into lo/hi. x, lo and hi all have length d.
using RhsFunction =
    std::function<void(std::span<const double> x, std::span<double> lo, std::span<double> hi)>;

enum class SystemKind { exponential, michaelis_menten, custom };

/// Constants below this value are clamped up because the resolution coupling
/// and the uniform step-count formula divide by L and P.
inline constexpr double kDefaultConstantFloor = 1e-12;

/// A differential inclusion x' in F(x), x(0) in X0 on [0, T], together with
/// the constants the error bound needs. Immutable after construction.
class SystemSpec {
 public:
  SystemSpec(std::string name, SystemKind kind, std::size_t dimension, double horizon,
             double lipschitz, double bound, Box initial_set, RhsFunction rhs, int d_R, int d_F,
             double constant_floor = kDefaultConstantFloor);

  const std::string& name() const noexcept { return name_; }
  SystemKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  double horizon() const noexcept { return horizon_; }
  /// Lipschitz constant L after clamping.
  double lipschitz() const noexcept { return lipschitz_; }
  /// Uniform bound P on |f|_inf after clamping.
  double bound() const noexcept { return bound_; }
  const Box& initial_set() const noexcept { return initial_set_; }
  int d_R() const noexcept { return d_R_; }
  int d_F() const noexcept { return d_F_; }

  /// Growth rate of the exponential benchmark (the unclamped L it was built with).
  double exponential_rate() const;

  Box evaluate_rhs(std::span<const double> x) const;

  /// Allocation-free variant used by the Euler loop; no dimension checks.
  void evaluate_rhs_into(std::span<const double> x, std::span<double> lo,
                         std::span<double> hi) const {
    rhs_(x, lo, hi);
  }

  /// Copy with the effective dimensions replaced (config overrides).
  SystemSpec with_effective_dimensions(int d_R, int d_F) const;

 private:
  friend SystemSpec make_exponential_system(std::size_t, double, double);

  std::string name_;
  SystemKind kind_;
  std::size_t dimension_;
  double horizon_;
  double lipschitz_;
  double bound_;
  Box initial_set_;
  RhsFunction rhs_;
  int d_R_;
  int d_F_;
  double rate_ = 0.0;
};

/// x_i' in [0.9, 1.0] L x_i, x(0) = 1, T = 1, P = L e^L, d_R = d_F = d.
SystemSpec make_exponential_system(std::size_t d, double L,
                                   double constant_floor = kDefaultConstantFloor);

/// Reduced Michaelis-Menten kinetics with k2 in [1.8, 2.0].
///
///   x1' = -k1 e0 x1 + (k1 x1 + k_-1) x2
///   x2' in k1 e0 x1 - (k1 x1 + k_-1 + [k2-, k2+]) x2
///
/// with e0 = 0.6, k_-1 = 0.05, k1 = 0.5, x(0) = (0.75, 0.25), T = 1. L = 3.0 and
/// P = 0.61 are taken as given; they are not recomputed.
SystemSpec make_michaelis_menten();

struct MichaelisMentenParameters {
  double e0 = 0.6;
  double k_minus1 = 0.05;
  double k1 = 0.5;
  double k2_lower = 1.8;
  double k2_upper = 2.0;
};

/// [exp(0.9 L t), exp(L t)]^d for the exponential benchmark.
Box exact_reachable_box(const SystemSpec& system, double t);

}  // namespace reach
