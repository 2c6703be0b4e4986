#include "reach/euler.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <iterator>
#include <string>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "reach/error_model.hpp"
#include "reach/errors.hpp"

namespace reach {

namespace {

// Dense bitmaps are used while the bounding box stays within this many bits
// and is not much sparser than the work that fills it.
constexpr double kMaxBitmapBits = 1u << 31;
constexpr double kMaxBitmapSparsity = 256.0;

/// Splits [0, count) into `parts` contiguous chunks and runs fn(part, begin, end).
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned parts, Fn&& fn) {
  parts = std::max(1u, std::min<unsigned>(parts, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  auto bounds = [&](unsigned p) { return count * p / parts; };
  if (parts == 1) {
    fn(0u, std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(parts);
  {
    std::vector<std::jthread> threads;
    threads.reserve(parts);
    for (unsigned p = 0; p < parts; ++p) {
      threads.emplace_back([&, p] {
        try {
          fn(p, bounds(p), bounds(p + 1));
        } catch (...) {
          errors[p] = std::current_exception();
        }
      });
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

/// Box x + h F(x), rounded outward by one ulp on each side.
void euler_image(const SystemSpec& system, std::span<const double> x, double h,
                 std::span<double> flo, std::span<double> fhi, std::span<double> lo,
                 std::span<double> hi) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  system.evaluate_rhs_into(x, flo, fhi);
  for (std::size_t i = 0; i < x.size(); ++i) {
    lo[i] = std::nextafter(x[i] + h * flo[i], -inf);
    hi[i] = std::nextafter(x[i] + h * fhi[i], inf);
  }
}

struct ChunkScan {
  std::uint64_t count = 0;
  double count_real = 0.0;
  std::vector<std::int64_t> min;
  std::vector<std::int64_t> max;
};

/// One step of the recursion: projects the Euler image of every source point
/// and returns the union as a sorted lattice set. `cost` receives the number
/// of points computed (with multiplicity).
class StepBuilder {
 public:
  StepBuilder(const SystemSpec& system, const LatticeSet& sources, double h, double rho,
              const EulerOptions& options, std::size_t step)
      : system_(system),
        sources_(sources),
        h_(h),
        rho_(rho),
        options_(options),
        step_(step),
        d_(system.dimension()) {}

  LatticeSet build(std::uint64_t& cost) {
    const unsigned parts = std::max(1u, options_.workers);
    std::vector<ChunkScan> scans(parts);
    parallel_chunks(sources_.size(), parts, [&](unsigned p, std::size_t begin, std::size_t end) {
      scans[p] = scan(begin, end);
    });

    ChunkScan total;
    total.min.assign(d_, std::numeric_limits<std::int64_t>::max());
    total.max.assign(d_, std::numeric_limits<std::int64_t>::min());
    for (const ChunkScan& s : scans) {
      total.count += s.count;
      total.count_real += s.count_real;
      if (s.min.empty()) continue;
      for (std::size_t k = 0; k < d_; ++k) {
        total.min[k] = std::min(total.min[k], s.min[k]);
        total.max[k] = std::max(total.max[k], s.max[k]);
      }
    }
    if (total.count_real > static_cast<double>(options_.cardinality_cap)) {
      throw ResourceError("step " + std::to_string(step_) + " would compute " +
                              std::to_string(total.count_real) +
                              " grid points, above the cardinality cap " +
                              std::to_string(options_.cardinality_cap),
                          step_, total.count_real);
    }
    cost = total.count;
    min_ = total.min;
    extent_.resize(d_);
    stride_.resize(d_);
    double volume = 1.0;
    for (std::size_t k = 0; k < d_; ++k) {
      extent_[k] = static_cast<std::uint64_t>(total.max[k] - total.min[k] + 1);
      volume *= static_cast<double>(extent_[k]);
    }
    if (volume >= 0x1p63) {
      throw ResourceError("step " + std::to_string(step_) + ": lattice bounding box too large",
                          step_, total.count_real);
    }
    std::uint64_t s = 1;
    for (std::size_t k = d_; k-- > 0;) {
      stride_[k] = s;
      s *= extent_[k];
    }
    if (volume <= kMaxBitmapBits && volume <= kMaxBitmapSparsity * total.count_real + 4096.0) {
      return build_bitmap(static_cast<std::uint64_t>(volume), parts);
    }
    return build_sorted(parts);
  }

 private:
  template <typename Fn>
  void for_each_range(std::size_t begin, std::size_t end, Fn&& fn) const {
    std::vector<double> x(d_), flo(d_), fhi(d_), lo(d_), hi(d_);
    std::vector<std::int64_t> zlo(d_), zhi(d_);
    for (std::size_t i = begin; i < end; ++i) {
      const auto z = sources_.index(i);
      for (std::size_t k = 0; k < d_; ++k) x[k] = sources_.resolution() * static_cast<double>(z[k]);
      euler_image(system_, x, h_, flo, fhi, lo, hi);
      projection_range_into(lo, hi, rho_, zlo, zhi);
      fn(std::span<const std::int64_t>(zlo), std::span<const std::int64_t>(zhi));
    }
  }

  ChunkScan scan(std::size_t begin, std::size_t end) const {
    ChunkScan out;
    if (begin == end) return out;
    out.min.assign(d_, std::numeric_limits<std::int64_t>::max());
    out.max.assign(d_, std::numeric_limits<std::int64_t>::min());
    for_each_range(begin, end, [&](std::span<const std::int64_t> lo, std::span<const std::int64_t> hi) {
      double c = 1.0;
      for (std::size_t k = 0; k < d_; ++k) {
        c *= static_cast<double>(hi[k] - lo[k] + 1);
        out.min[k] = std::min(out.min[k], lo[k]);
        out.max[k] = std::max(out.max[k], hi[k]);
      }
      out.count_real += c;
      if (out.count_real < 0x1p62) out.count += static_cast<std::uint64_t>(c);
    });
    return out;
  }

  /// Visits every row (run along the last axis) of an index box as
  /// (linear offset of the first cell, run length).
  template <typename Fn>
  void for_each_row(std::span<const std::int64_t> lo, std::span<const std::int64_t> hi, Fn&& fn) const {
    std::vector<std::int64_t> z(lo.begin(), lo.end());
    const std::size_t last = d_ - 1;
    const auto run = static_cast<std::uint64_t>(hi[last] - lo[last] + 1);
    while (true) {
      std::uint64_t offset = 0;
      for (std::size_t k = 0; k < d_; ++k) offset += static_cast<std::uint64_t>(z[k] - min_[k]) * stride_[k];
      fn(offset, run);
      std::size_t axis = last;
      while (true) {
        if (axis == 0) return;
        --axis;
        if (z[axis] < hi[axis]) {
          ++z[axis];
          break;
        }
        z[axis] = lo[axis];
      }
    }
  }

  void decode(std::uint64_t linear, std::vector<std::int64_t>& out) const {
    for (std::size_t k = 0; k < d_; ++k) {
      out.push_back(min_[k] + static_cast<std::int64_t>(linear / stride_[k]));
      linear %= stride_[k];
    }
  }

  LatticeSet build_bitmap(std::uint64_t volume, unsigned parts) {
    std::vector<std::uint64_t> words((volume + 63) / 64, 0);
    const bool shared = parts > 1;
    auto set_bits = [&](std::uint64_t first, std::uint64_t length) {
      std::uint64_t pos = first;
      const std::uint64_t stop = first + length;
      while (pos < stop) {
        const std::uint64_t word = pos / 64;
        const unsigned bit = static_cast<unsigned>(pos % 64);
        const std::uint64_t span = std::min<std::uint64_t>(64 - bit, stop - pos);
        const std::uint64_t mask = (span == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << span) - 1)) << bit;
        if (shared) {
          std::atomic_ref<std::uint64_t>(words[word]).fetch_or(mask, std::memory_order_relaxed);
        } else {
          words[word] |= mask;
        }
        pos += span;
      }
    };
    parallel_chunks(sources_.size(), parts, [&](unsigned, std::size_t begin, std::size_t end) {
      for_each_range(begin, end, [&](std::span<const std::int64_t> lo, std::span<const std::int64_t> hi) {
        for_each_row(lo, hi, set_bits);
      });
    });

    std::size_t population = 0;
    for (std::uint64_t w : words) population += static_cast<std::size_t>(std::popcount(w));
    std::vector<std::int64_t> flat;
    flat.reserve(population * d_);
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits != 0) {
        const unsigned bit = static_cast<unsigned>(std::countr_zero(bits));
        decode(w * 64 + bit, flat);
        bits &= bits - 1;
      }
    }
    return LatticeSet::from_sorted_unique(rho_, d_, std::move(flat));
  }

  LatticeSet build_sorted(unsigned parts) {
    std::vector<std::vector<std::uint64_t>> keys(parts);
    parallel_chunks(sources_.size(), parts, [&](unsigned p, std::size_t begin, std::size_t end) {
      auto& mine = keys[p];
      for_each_range(begin, end, [&](std::span<const std::int64_t> lo, std::span<const std::int64_t> hi) {
        for_each_row(lo, hi, [&](std::uint64_t first, std::uint64_t length) {
          for (std::uint64_t q = 0; q < length; ++q) mine.push_back(first + q);
        });
      });
      std::sort(mine.begin(), mine.end());
      mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
    });
    std::vector<std::uint64_t> merged = std::move(keys[0]);
    for (unsigned p = 1; p < parts; ++p) {
      std::vector<std::uint64_t> next;
      next.reserve(merged.size() + keys[p].size());
      std::set_union(merged.begin(), merged.end(), keys[p].begin(), keys[p].end(),
                     std::back_inserter(next));
      merged = std::move(next);
    }
    std::vector<std::int64_t> flat;
    flat.reserve(merged.size() * d_);
    for (std::uint64_t key : merged) decode(key, flat);
    return LatticeSet::from_sorted_unique(rho_, d_, std::move(flat));
  }

  const SystemSpec& system_;
  const LatticeSet& sources_;
  double h_;
  double rho_;
  const EulerOptions& options_;
  std::size_t step_;
  std::size_t d_;
  std::vector<std::int64_t> min_;
  std::vector<std::uint64_t> extent_;
  std::vector<std::uint64_t> stride_;
};

}  // namespace

double RunRecord::total_cost() const {
  double total = 0.0;
  for (std::uint64_t c : cost_exact) total += static_cast<double>(c);
  return total;
}

RunRecord euler_run(const SystemSpec& system, const Discretization& disc,
                    const EulerOptions& options) {
  const double T = system.horizon();
  if (std::abs(disc.horizon() - T) > 1e-12 * T) {
    throw InputError("euler_run: discretization does not span the system horizon");
  }
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = disc.n();
  const int d_R = system.d_R();
  const int d_F = system.d_F();

  RunRecord record{disc, {}, {}, {}, {}, {}, 0.0, 0.0};
  record.set_sizes.reserve(n + 1);
  record.cost_exact.reserve(n);

  const IndexRange initial_range = projection_range(system.initial_set(), disc.resolution(0));
  if (initial_range.count() > static_cast<double>(options.cardinality_cap)) {
    throw ResourceError("initial projection exceeds the cardinality cap", 0, initial_range.count());
  }
  LatticeSet current = project_box(system.initial_set(), disc.resolution(0));
  record.set_sizes.push_back(current.size());

  for (std::size_t k = 1; k <= n; ++k) {
    std::uint64_t cost = 0;
    LatticeSet next = [&] {
      try {
        StepBuilder builder(system, current, disc.step(k), disc.resolution(k), options, k);
        return builder.build(cost);
      } catch (const ResourceError& e) {
        if (e.step() == k) throw;
        throw ResourceError(std::string(e.what()) + " (step " + std::to_string(k) + ")", k,
                            e.projected_cost());
      }
    }();
    record.cost_exact.push_back(cost);
    record.set_sizes.push_back(next.size());
    if (options.keep_sets) record.sets.push_back(std::move(current));
    current = std::move(next);
  }
  record.sets.push_back(std::move(current));

  record.vhat_R.resize(n + 1);
  record.vhat_F.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    record.vhat_R[j] = static_cast<double>(record.set_sizes[j]) * ipow(disc.resolution(j), d_R);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double per_point =
        static_cast<double>(record.cost_exact[j]) / static_cast<double>(record.set_sizes[j]);
    record.vhat_F[j] = per_point * ipow(disc.resolution(j + 1) / disc.step(j + 1), d_F);
  }
  record.vhat_F[n] = record.vhat_F[n - 1];

  record.error_bound = error_total(disc, system.lipschitz(), system.bound());
  record.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

void write_summary(std::ostream& os, const RunRecord& record) {
  const auto precision = os.precision(17);
  os << "n " << record.disc.n() << " E " << record.error_bound << " cost " << record.total_cost()
     << '\n';
  os.precision(precision);
}

void write_steps_csv(std::ostream& os, const RunRecord& record) {
  const auto precision = os.precision(17);
  os << "j,t_j,h_j,rho_j,set_size,cost_exact,vhat_R,vhat_F\n";
  const Discretization& disc = record.disc;
  for (std::size_t j = 0; j <= disc.n(); ++j) {
    os << j << ',' << disc.node(j) << ',';
    if (j > 0) os << disc.step(j);
    os << ',' << disc.resolution(j) << ',' << record.set_sizes[j] << ',';
    if (j < disc.n()) os << record.cost_exact[j];
    os << ',' << record.vhat_R[j] << ',' << record.vhat_F[j] << '\n';
  }
  os.precision(precision);
}

}  // namespace reach
