#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace reach {

/// Exact integer bookkeeping for discretizations produced by refinement from
/// the single-interval start. Every step is h_j = T 2^-level_j, every
/// resolution is rho_j = base 4^-rho_level_j with base = 2 L P T^2, and every
/// node is t_j = T ticks_j 2^-kMaxLevel.
struct DyadicLevels {
  static constexpr int kMaxLevel = 60;

  double rho_base = 0.0;
  std::vector<int> h_level;            // n entries, for h_1..h_n
  std::vector<int> rho_level;          // n+1 entries, for rho_0..rho_n
  std::vector<std::uint64_t> t_ticks;  // n+1 entries, for t_0..t_n

  bool operator==(const DyadicLevels&) const = default;
};

/// Result of checking the structural facts every refinement path satisfies.
struct ConformanceReport {
  double max_sum_drift_ulps = 0.0;  // |t_k - sum_{j<=k} h_j| in ulps of t_k
  bool nodes_are_cumulative_sums = false;  // drift within n ulps
  bool coupling_exact = false;              // rho_j = 2 L P h_j^2 on the integer levels
  bool steps_dyadic = false;                // h_j = 2^-l T
  bool nodes_grid_aligned = false;          // t_j is an integer multiple of h_j
  bool ok() const {
    return nodes_are_cumulative_sums && coupling_exact && steps_dyadic && nodes_grid_aligned;
  }
};

/// A non-uniform space-time discretization (h, t, rho): n time steps h_1..h_n,
/// nodes t_0..t_n and spatial resolutions rho_0..rho_n. Immutable; refinement
/// returns a new value.
///
/// Indexing follows the time-step convention: step(j) is h_j for j in [1, n]
/// while node(j) and resolution(j) accept j in [0, n].
class Discretization {
 public:
  /// The single-interval start ((T), (0, T), (2LPT^2, 2LPT^2)).
  static Discretization initial(double T, double L, double P);

  /// n equal steps T/n with resolution T^2/n^2 at every node.
  static Discretization uniform(double T, std::size_t n);

  /// Arbitrary arrays; nodes are the running sums of h. No dyadic tracking.
  static Discretization from_arrays(std::vector<double> h, std::vector<double> rho);

  std::size_t n() const noexcept { return h_.size(); }
  double horizon() const noexcept { return t_.back(); }

  double step(std::size_t j) const;
  double node(std::size_t j) const;
  double resolution(std::size_t j) const;

  std::span<const double> steps() const noexcept { return h_; }
  std::span<const double> nodes() const noexcept { return t_; }
  std::span<const double> resolutions() const noexcept { return rho_; }

  const std::optional<DyadicLevels>& dyadic() const noexcept { return dyadic_; }

  /// The subdivision operator: j = 0 quarters rho_0; j in [1, n] halves h_j,
  /// inserts the node t_j - h_j/2 and replaces rho_j by two copies of rho_j/4.
  Discretization subdivide(std::size_t j) const;

  /// rho_j == 2 L P h_j^2 for all j >= 1, exactly on the dyadic levels when
  /// tracked, otherwise to relative tolerance 1e-12.
  bool satisfies_coupling(double L, double P) const;

  ConformanceReport conformance(double L, double P) const;

  /// Plain-text record: n, then one line each for h, t and rho.
  void write_text(std::ostream& os) const;

  bool operator==(const Discretization&) const = default;

 private:
  Discretization() = default;

  std::vector<double> h_;
  std::vector<double> t_;
  std::vector<double> rho_;
  std::optional<DyadicLevels> dyadic_;
};

}  // namespace reach
