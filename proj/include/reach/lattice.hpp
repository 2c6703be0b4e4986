#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "reach/systems.hpp"

namespace reach {

/// A finite subset of the scaled lattice rho Z^d. Points are stored as integer
/// tuples z (state point rho z), flattened, sorted lexicographically and
/// without duplicates.
class LatticeSet {
 public:
  LatticeSet(double resolution, std::size_t dimension);

  /// Builds a set from flattened tuples; sorts and removes duplicates.
  static LatticeSet from_indices(double resolution, std::size_t dimension,
                                 std::vector<std::int64_t> flat);

  /// Adopts tuples that are already sorted and unique.
  static LatticeSet from_sorted_unique(double resolution, std::size_t dimension,
                                       std::vector<std::int64_t> flat);

  double resolution() const noexcept { return resolution_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return dimension_ == 0 ? 0 : coords_.size() / dimension_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const std::int64_t> index(std::size_t i) const {
    return {coords_.data() + i * dimension_, dimension_};
  }
  std::vector<double> state_point(std::size_t i) const;
  std::span<const std::int64_t> flat() const noexcept { return coords_; }

  bool contains(std::span<const std::int64_t> z) const;

  bool operator==(const LatticeSet&) const = default;

 private:
  double resolution_;
  std::size_t dimension_;
  std::vector<std::int64_t> coords_;
};

/// Per-axis integer index ranges [lo_i, hi_i] of a projected box.
struct IndexRange {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  /// Product of the axis lengths; 0 if any axis is empty.
  double count() const;
};

/// Index ranges of (b + B_{rho/2}(0)) cap rho Z^d. Boundary ties are included;
/// values within a few ulps of a tie may add one extra boundary layer.
IndexRange projection_range(const Box& b, double rho);

/// The same range written into caller-provided buffers (hot loop variant).
void projection_range_into(std::span<const double> lower, std::span<const double> upper,
                           double rho, std::span<std::int64_t> lo, std::span<std::int64_t> hi);

/// pi_rho(b) as a lattice set. Never empty for a valid box.
LatticeSet project_box(const Box& b, double rho);

struct UnionResult {
  LatticeSet set;
  /// #addition, counted before deduplication against the target.
  std::size_t addition_count;
};

UnionResult union_into(const LatticeSet& target, const LatticeSet& addition);

/// Finite point cloud in R^d, one std::vector per point.
using PointList = std::vector<std::vector<double>>;

/// Max-norm Hausdorff distance between two finite point sets (brute force).
double hausdorff_points(const PointList& a, const PointList& b);

/// sup over a in A of the max-norm distance from rho a to the box.
double directed_set_to_box(const LatticeSet& a, const Box& b);

/// sup over y in b of the max-norm distance from y to the lattice set,
/// evaluated by bisection on the covering radius. The returned value is an
/// upper bound that is tight to about 1e-13 relative.
double directed_box_to_set(const LatticeSet& a, const Box& b);

/// dist_H(points of A, b) in the max norm.
double hausdorff_to_box(const LatticeSet& a, const Box& b);

/// Header "# rho <value> d <dim> points <count>" followed by one
/// "z1 z2 ... zd" row per point. stride > 1 keeps every stride-th point.
void write_points(std::ostream& os, const LatticeSet& set, std::size_t stride = 1);

}  // namespace reach
