#include "reach/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "reach/errors.hpp"

namespace reach {

namespace {

bool tuple_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Indices beyond this magnitude would overflow later arithmetic on them.
constexpr double kMaxIndexMagnitude = 4.0e18;

std::int64_t checked_index(double q) {
  if (!(std::abs(q) < kMaxIndexMagnitude)) {
    throw ResourceError("lattice index overflow (resolution too fine for the state range)", 0, q);
  }
  return static_cast<std::int64_t>(q);
}

}  // namespace

LatticeSet::LatticeSet(double resolution, std::size_t dimension)
    : resolution_(resolution), dimension_(dimension) {
  if (!(resolution > 0.0)) throw InputError("lattice resolution must be positive");
  if (dimension == 0) throw InputError("lattice dimension must be positive");
}

LatticeSet LatticeSet::from_indices(double resolution, std::size_t dimension,
                                    std::vector<std::int64_t> flat) {
  LatticeSet set(resolution, dimension);
  if (flat.size() % dimension != 0) throw InputError("flat index array is not a multiple of d");
  const std::size_t count = flat.size() / dimension;
  auto tuple = [&](std::size_t i) {
    return std::span<const std::int64_t>(flat.data() + i * dimension, dimension);
  };
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return tuple_less(tuple(a), tuple(b)); });
  set.coords_.reserve(flat.size());
  for (std::size_t k = 0; k < count; ++k) {
    const auto z = tuple(order[k]);
    if (k > 0 && std::equal(z.begin(), z.end(), tuple(order[k - 1]).begin())) continue;
    set.coords_.insert(set.coords_.end(), z.begin(), z.end());
  }
  return set;
}

LatticeSet LatticeSet::from_sorted_unique(double resolution, std::size_t dimension,
                                          std::vector<std::int64_t> flat) {
  LatticeSet set(resolution, dimension);
  if (flat.size() % dimension != 0) throw InputError("flat index array is not a multiple of d");
  set.coords_ = std::move(flat);
  return set;
}

std::vector<double> LatticeSet::state_point(std::size_t i) const {
  std::vector<double> x(dimension_);
  const auto z = index(i);
  for (std::size_t k = 0; k < dimension_; ++k) x[k] = resolution_ * static_cast<double>(z[k]);
  return x;
}

bool LatticeSet::contains(std::span<const std::int64_t> z) const {
  if (z.size() != dimension_) return false;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (tuple_less(index(mid), z)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && std::equal(z.begin(), z.end(), index(lo).begin());
}

double IndexRange::count() const {
  double total = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) return 0.0;
    total *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  return total;
}

void projection_range_into(std::span<const double> lower, std::span<const double> upper,
                           double rho, std::span<std::int64_t> lo, std::span<std::int64_t> hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < lower.size(); ++i) {
    // rho z in [lower - rho/2, upper + rho/2], inflated by about two ulps so
    // that exact ties survive the rounding of the division.
    const double qlo = lower[i] / rho - 0.5;
    const double qhi = upper[i] / rho + 0.5;
    const double slack_lo = 4.0 * eps * std::max(1.0, std::abs(qlo));
    const double slack_hi = 4.0 * eps * std::max(1.0, std::abs(qhi));
    lo[i] = checked_index(std::ceil(qlo - slack_lo));
    hi[i] = checked_index(std::floor(qhi + slack_hi));
  }
}

IndexRange projection_range(const Box& b, double rho) {
  if (b.dimension() == 0) throw InputError("project_box: empty box");
  if (!(rho > 0.0)) throw InputError("project_box: resolution must be positive");
  IndexRange range;
  range.lo.resize(b.dimension());
  range.hi.resize(b.dimension());
  projection_range_into(b.lower, b.upper, rho, range.lo, range.hi);
  return range;
}

LatticeSet project_box(const Box& b, double rho) {
  const IndexRange range = projection_range(b, rho);
  const std::size_t d = b.dimension();
  const double count = range.count();
  if (count > 1e9) throw ResourceError("project_box: projection too large", 0, count);
  std::vector<std::int64_t> flat;
  flat.reserve(static_cast<std::size_t>(count) * d);
  std::vector<std::int64_t> z(range.lo);
  // Row-major walk; the last axis varies fastest, which is lexicographic order.
  while (true) {
    flat.insert(flat.end(), z.begin(), z.end());
    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (z[axis] < range.hi[axis]) {
        ++z[axis];
        break;
      }
      z[axis] = range.lo[axis];
      if (axis == 0) return LatticeSet::from_sorted_unique(rho, d, std::move(flat));
    }
  }
}

UnionResult union_into(const LatticeSet& target, const LatticeSet& addition) {
  if (target.dimension() != addition.dimension()) throw InputError("union: dimension mismatch");
  if (target.resolution() != addition.resolution()) throw InputError("union: resolution mismatch");
  const std::size_t d = target.dimension();
  std::vector<std::int64_t> merged;
  merged.reserve(target.flat().size() + addition.flat().size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < target.size() || j < addition.size()) {
    if (j == addition.size() || (i < target.size() && tuple_less(target.index(i), addition.index(j)))) {
      const auto z = target.index(i++);
      merged.insert(merged.end(), z.begin(), z.end());
    } else if (i == target.size() || tuple_less(addition.index(j), target.index(i))) {
      const auto z = addition.index(j++);
      merged.insert(merged.end(), z.begin(), z.end());
    } else {
      const auto z = target.index(i++);
      ++j;
      merged.insert(merged.end(), z.begin(), z.end());
    }
  }
  return {LatticeSet::from_sorted_unique(target.resolution(), d, std::move(merged)),
          addition.size()};
}

double hausdorff_points(const PointList& a, const PointList& b) {
  if (a.empty() || b.empty()) throw InputError("hausdorff_points: empty point set");
  const std::size_t d = a.front().size();
  for (const auto& p : a) {
    if (p.size() != d) throw InputError("hausdorff_points: dimension mismatch");
  }
  for (const auto& p : b) {
    if (p.size() != d) throw InputError("hausdorff_points: dimension mismatch");
  }
  auto directed = [d](const PointList& from, const PointList& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        double dist = 0.0;
        for (std::size_t k = 0; k < d; ++k) dist = std::max(dist, std::abs(p[k] - q[k]));
        nearest = std::min(nearest, dist);
      }
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double directed_set_to_box(const LatticeSet& a, const Box& b) {
  if (a.empty()) throw InputError("hausdorff: empty lattice set");
  if (a.dimension() != b.dimension()) throw InputError("hausdorff: dimension mismatch");
  const double rho = a.resolution();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto z = a.index(i);
    for (std::size_t k = 0; k < a.dimension(); ++k) {
      const double x = rho * static_cast<double>(z[k]);
      worst = std::max({worst, b.lower[k] - x, x - b.upper[k]});
    }
  }
  return worst;
}

namespace {

// Occupancy of a lattice set over its bounding box with d-dimensional
// prefix sums, answering "does this index window contain a point" in O(2^d).
class OccupancyTable {
 public:
  explicit OccupancyTable(const LatticeSet& a) : d_(a.dimension()), min_(d_), max_(d_), stride_(d_) {
    for (std::size_t k = 0; k < d_; ++k) {
      min_[k] = std::numeric_limits<std::int64_t>::max();
      max_[k] = std::numeric_limits<std::int64_t>::min();
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto z = a.index(i);
      for (std::size_t k = 0; k < d_; ++k) {
        min_[k] = std::min(min_[k], z[k]);
        max_[k] = std::max(max_[k], z[k]);
      }
    }
    double cells = 1.0;
    for (std::size_t k = 0; k < d_; ++k) cells *= static_cast<double>(max_[k] - min_[k] + 2);
    if (cells > kMaxCells) {
      throw ResourceError("hausdorff: lattice set bounding box too large for the occupancy table",
                          0, cells);
    }
    std::size_t total = 1;
    for (std::size_t k = d_; k-- > 0;) {
      stride_[k] = total;
      total *= static_cast<std::size_t>(max_[k] - min_[k] + 2);
    }
    sums_.assign(total, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto z = a.index(i);
      std::size_t offset = 0;
      for (std::size_t k = 0; k < d_; ++k) offset += static_cast<std::size_t>(z[k] - min_[k] + 1) * stride_[k];
      sums_[offset] = 1;
    }
    for (std::size_t k = 0; k < d_; ++k) {
      const std::size_t extent = static_cast<std::size_t>(max_[k] - min_[k] + 2);
      for (std::size_t cell = 0; cell < total; ++cell) {
        if ((cell / stride_[k]) % extent != 0) sums_[cell] += sums_[cell - stride_[k]];
      }
    }
  }

  std::int64_t min(std::size_t k) const { return min_[k]; }
  std::int64_t max(std::size_t k) const { return max_[k]; }

  /// Number of points in the window [lo_k, hi_k] (absolute indices, inside the bbox).
  std::int64_t count(std::span<const std::int64_t> lo, std::span<const std::int64_t> hi) const {
    std::int64_t total = 0;
    const std::size_t corners = std::size_t{1} << d_;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      std::size_t offset = 0;
      int sign = 1;
      for (std::size_t k = 0; k < d_; ++k) {
        if (mask & (std::size_t{1} << k)) {
          offset += static_cast<std::size_t>(lo[k] - min_[k]) * stride_[k];
          sign = -sign;
        } else {
          offset += static_cast<std::size_t>(hi[k] - min_[k] + 1) * stride_[k];
        }
      }
      total += sign * sums_[offset];
    }
    return total;
  }

 private:
  static constexpr double kMaxCells = 1 << 26;

  std::size_t d_;
  std::vector<std::int64_t> min_;
  std::vector<std::int64_t> max_;
  std::vector<std::size_t> stride_;
  std::vector<std::int64_t> sums_;
};

struct Window {
  std::int64_t lo;
  std::int64_t hi;
  bool operator==(const Window&) const = default;
};

// Index windows {z : |y - rho z| <= r} for y ranging over [lower, upper],
// one per open piece between breakpoints, reduced to the minimal ones.
// Returns false if some piece sees no lattice index of the set's bbox.
bool axis_windows(double lower, double upper, double rho, double r, std::int64_t amin,
                  std::int64_t amax, std::vector<Window>& out) {
  out.clear();
  std::vector<double> samples;
  if (lower == upper) {
    samples.push_back(lower);
  } else {
    std::vector<double> cuts{lower, upper};
    for (const double shift : {-r, r}) {
      const double zlo = std::floor((lower - shift) / rho);
      const double zhi = std::ceil((upper - shift) / rho);
      if (zhi - zlo > 1e8) throw ResourceError("hausdorff: box too wide for its resolution", 0, zhi - zlo);
      for (double z = zlo; z <= zhi; z += 1.0) {
        const double c = rho * z + shift;
        if (c > lower && c < upper) cuts.push_back(c);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) samples.push_back(0.5 * (cuts[k] + cuts[k + 1]));
  }
  std::vector<Window> raw;
  raw.reserve(samples.size());
  for (const double y : samples) {
    const auto wl = static_cast<std::int64_t>(std::ceil((y - r) / rho));
    const auto wh = static_cast<std::int64_t>(std::floor((y + r) / rho));
    const std::int64_t lo = std::max(wl, amin);
    const std::int64_t hi = std::min(wh, amax);
    if (lo > hi) return false;
    if (raw.empty() || !(raw.back() == Window{lo, hi})) raw.push_back({lo, hi});
  }
  // Both ends are nondecreasing along the axis, so a window that contains any
  // other window contains one of its neighbours.
  for (std::size_t k = 0; k < raw.size(); ++k) {
    auto contains = [&](std::size_t o) { return raw[k].lo <= raw[o].lo && raw[k].hi >= raw[o].hi; };
    if ((k > 0 && contains(k - 1)) || (k + 1 < raw.size() && contains(k + 1))) continue;
    out.push_back(raw[k]);
  }
  return true;
}

bool box_covered(const OccupancyTable& table, const Box& b, double rho, double r) {
  const std::size_t d = b.dimension();
  std::vector<std::vector<Window>> windows(d);
  for (std::size_t k = 0; k < d; ++k) {
    if (!axis_windows(b.lower[k], b.upper[k], rho, r, table.min(k), table.max(k), windows[k])) {
      return false;
    }
  }
  std::vector<std::size_t> digit(d, 0);
  std::vector<std::int64_t> lo(d), hi(d);
  while (true) {
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = windows[k][digit[k]].lo;
      hi[k] = windows[k][digit[k]].hi;
    }
    if (table.count(lo, hi) == 0) return false;
    std::size_t axis = d;
    while (true) {
      if (axis == 0) return true;
      --axis;
      if (++digit[axis] < windows[axis].size()) break;
      digit[axis] = 0;
    }
  }
}

}  // namespace

double directed_box_to_set(const LatticeSet& a, const Box& b) {
  if (a.empty()) throw InputError("hausdorff: empty lattice set");
  if (a.dimension() != b.dimension()) throw InputError("hausdorff: dimension mismatch");
  const double rho = a.resolution();
  const OccupancyTable table(a);

  // Distance from the farthest box corner to any single point bounds the
  // covering radius from above.
  const auto z0 = a.index(0);
  double upper = 0.0;
  for (std::size_t k = 0; k < a.dimension(); ++k) {
    const double x = rho * static_cast<double>(z0[k]);
    upper = std::max({upper, std::abs(b.lower[k] - x), std::abs(b.upper[k] - x)});
  }
  if (box_covered(table, b, rho, 0.0)) return 0.0;
  while (!box_covered(table, b, rho, upper)) upper = 2.0 * upper + rho;
  double lower = 0.0;
  for (int iter = 0; iter < 200 && upper - lower > 1e-13 * upper; ++iter) {
    const double mid = 0.5 * (lower + upper);
    if (mid <= lower || mid >= upper) break;
    if (box_covered(table, b, rho, mid)) {
      upper = mid;
    } else {
      lower = mid;
    }
  }
  return upper;
}

double hausdorff_to_box(const LatticeSet& a, const Box& b) {
  return std::max(directed_set_to_box(a, b), directed_box_to_set(a, b));
}

void write_points(std::ostream& os, const LatticeSet& set, std::size_t stride) {
  if (stride == 0) stride = 1;
  const auto precision = os.precision(17);
  os << "# rho " << set.resolution() << " d " << set.dimension() << " points " << set.size();
  if (stride > 1) os << " stride " << stride;
  os << '\n';
  for (std::size_t i = 0; i < set.size(); i += stride) {
    const auto z = set.index(i);
    for (std::size_t k = 0; k < z.size(); ++k) os << (k ? " " : "") << z[k];
    os << '\n';
  }
  os.precision(precision);
}

}  // namespace reach
