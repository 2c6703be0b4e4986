#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "reach/errors.hpp"
#include "reach/lattice.hpp"

using namespace reach;

namespace {

std::vector<std::int64_t> flat(const LatticeSet& s) { return {s.flat().begin(), s.flat().end()}; }

// Lattice indices z with rho z in [lo - rho/2, hi + rho/2], by enumeration.
std::vector<std::int64_t> enumerate_axis(double lo, double hi, double rho) {
  std::vector<std::int64_t> out;
  for (std::int64_t z = -1000; z <= 1000; ++z) {
    const double x = rho * static_cast<double>(z);
    if (x >= lo - rho / 2 && x <= hi + rho / 2) out.push_back(z);
  }
  return out;
}

// Brute-force oracle for dist_H(A, box) in 1d: the box side is the largest
// gap between consecutive set points inside the box, halved, plus the ends.
double hausdorff_1d(const LatticeSet& a, double lo, double hi) {
  std::vector<double> x;
  for (std::size_t i = 0; i < a.size(); ++i) x.push_back(a.state_point(i)[0]);
  double to_box = 0.0;
  for (double v : x) to_box = std::max(to_box, std::max({lo - v, v - hi, 0.0}));
  auto nearest = [&](double y) {
    double best = INFINITY;
    for (double v : x) best = std::min(best, std::abs(v - y));
    return best;
  };
  double from_box = std::max(nearest(lo), nearest(hi));
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    if (mid >= lo && mid <= hi) from_box = std::max(from_box, nearest(mid));
  }
  return std::max(to_box, from_box);
}

}  // namespace

TEST_CASE("projection examples") {
  const LatticeSet a = project_box(Box({0.3}, {0.7}), 0.5);
  CHECK(flat(a) == std::vector<std::int64_t>{1});
  CHECK(a.state_point(0)[0] == 0.5);

  CHECK(flat(project_box(Box({0.0}, {2.0}), 1.0)) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(flat(project_box(Box({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}), 0.37)) ==
        std::vector<std::int64_t>{0, 0, 0});

  // Point X0 = 1 on the grid of spacing 2e: only z = 0 lies within e.
  const double rho = 2.0 * std::exp(1.0);
  CHECK(flat(project_box(Box({1.0}, {1.0}), rho)) == std::vector<std::int64_t>{0});

  // Exact ties at distance rho/2 are included.
  CHECK(flat(project_box(Box({0.5}, {0.5}), 1.0)) == std::vector<std::int64_t>{0, 1});
  CHECK_THROWS_AS(project_box(Box({0.0}, {1.0}), 0.0), InputError);
}

TEST_CASE("projection agrees with enumeration") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> len(0.0, 5.0);
  std::uniform_real_distribution<double> res(0.05, 3.0);
  for (int c = 0; c < 200; ++c) {
    const double lo0 = pos(rng), hi0 = lo0 + len(rng);
    const double lo1 = pos(rng), hi1 = lo1 + len(rng);
    const double rho = res(rng);
    const LatticeSet s = project_box(Box({lo0, lo1}, {hi0, hi1}), rho);
    const auto ax0 = enumerate_axis(lo0, hi0, rho);
    const auto ax1 = enumerate_axis(lo1, hi1, rho);
    // Boundary values within a few ulps of a tie may add one extra layer.
    CHECK(s.size() >= ax0.size() * ax1.size());
    CHECK(s.size() <= (ax0.size() + 2) * (ax1.size() + 2));
    for (std::int64_t a : ax0) {
      for (std::int64_t b : ax1) CHECK(s.contains(std::vector<std::int64_t>{a, b}));
    }
    const IndexRange range = projection_range(Box({lo0, lo1}, {hi0, hi1}), rho);
    CHECK(range.count() == static_cast<double>(s.size()));
  }
}

TEST_CASE("lattice set construction") {
  const LatticeSet s = LatticeSet::from_indices(1.0, 2, {3, 1, 0, 2, 3, 1, 0, 0});
  CHECK(flat(s) == std::vector<std::int64_t>{0, 0, 0, 2, 3, 1});
  CHECK(s.size() == 3);
  CHECK(s.contains(std::vector<std::int64_t>{0, 2}));
  CHECK_FALSE(s.contains(std::vector<std::int64_t>{2, 0}));
  CHECK_THROWS_AS(LatticeSet::from_indices(1.0, 2, {1, 2, 3}), InputError);
}

TEST_CASE("union counts every added point") {
  const LatticeSet a = LatticeSet::from_indices(1.0, 1, {0, 1});
  const LatticeSet b = LatticeSet::from_indices(1.0, 1, {1, 2});
  const UnionResult ab = union_into(a, b);
  CHECK(flat(ab.set) == std::vector<std::int64_t>{0, 1, 2});
  CHECK(ab.addition_count == 2);
  CHECK(union_into(b, a).set == ab.set);
  CHECK(union_into(ab.set, ab.set).set == ab.set);

  const UnionResult far = union_into(LatticeSet::from_indices(1.0, 1, {0}),
                                     LatticeSet::from_indices(1.0, 1, {5}));
  CHECK(flat(far.set) == std::vector<std::int64_t>{0, 5});
  CHECK(far.addition_count == 1);
  CHECK_THROWS_AS(union_into(a, LatticeSet::from_indices(0.5, 1, {0})), InputError);
}

TEST_CASE("point set hausdorff distance") {
  const PointList a{{0.0}, {1.0}};
  const PointList b{{0.0}};
  CHECK(hausdorff_points(a, a) == 0.0);
  CHECK(hausdorff_points({{0.0}}, {{1.0}}) == 1.0);
  CHECK(hausdorff_points(a, b) == 1.0);
  CHECK(hausdorff_points({{0.0, 0.0}}, {{1.0, -3.0}}) == 3.0);
}

TEST_CASE("set to box hausdorff distance") {
  const LatticeSet origin = LatticeSet::from_indices(1.0, 1, {0});
  CHECK(hausdorff_to_box(origin, Box({0.0}, {0.0})) == 0.0);
  CHECK(hausdorff_to_box(origin, Box({1.0}, {2.0})) == doctest::Approx(2.0));
  CHECK(directed_set_to_box(origin, Box({1.0}, {2.0})) == doctest::Approx(1.0));
  CHECK(directed_box_to_set(origin, Box({1.0}, {2.0})) == doctest::Approx(2.0));

  // Gap between 0 and 3 inside [0, 3]: the midpoint is 1.5 away.
  const LatticeSet gap = LatticeSet::from_indices(1.0, 1, {0, 3});
  CHECK(hausdorff_to_box(gap, Box({0.0}, {3.0})) == doctest::Approx(1.5).epsilon(1e-12));

  // Missing corner in 2d: the box corner (1, 1) is 1 away from the rest.
  const LatticeSet corner = LatticeSet::from_indices(1.0, 2, {0, 0, 0, 1, 1, 0});
  CHECK(hausdorff_to_box(corner, Box({0.0, 0.0}, {1.0, 1.0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("set to box distance against 1d oracle") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<std::int64_t> idx(-30, 30);
  std::uniform_int_distribution<int> count(1, 8);
  std::uniform_real_distribution<double> pos(-10.0, 10.0);
  for (int c = 0; c < 200; ++c) {
    std::vector<std::int64_t> z;
    for (int k = count(rng); k > 0; --k) z.push_back(idx(rng));
    const double rho = 0.3;
    const LatticeSet set = LatticeSet::from_indices(rho, 1, z);
    const double lo = pos(rng), hi = lo + std::abs(pos(rng)) / 2;
    CHECK(hausdorff_to_box(set, Box({lo}, {hi})) ==
          doctest::Approx(hausdorff_1d(set, lo, hi)).epsilon(1e-10));
  }
}

TEST_CASE("set to box distance against sampled 2d oracle") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<std::int64_t> idx(0, 12);
  std::uniform_int_distribution<int> count(1, 30);
  for (int c = 0; c < 40; ++c) {
    std::vector<std::int64_t> z;
    for (int k = count(rng); k > 0; --k) {
      z.push_back(idx(rng));
      z.push_back(idx(rng));
    }
    const double rho = 0.25;
    const LatticeSet set = LatticeSet::from_indices(rho, 2, z);
    const Box box({0.4, 0.2}, {2.6, 3.1});
    // Dense sampling of the box bounds the box-to-set side from below; the
    // sample spacing bounds the shortfall.
    const int m = 120;
    PointList samples, points;
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        samples.push_back({0.4 + 2.2 * i / m, 0.2 + 2.9 * j / m});
      }
    }
    for (std::size_t i = 0; i < set.size(); ++i) points.push_back(set.state_point(i));
    double from_box = 0.0;
    for (const auto& y : samples) {
      double best = INFINITY;
      for (const auto& p : points) {
        best = std::min(best, std::max(std::abs(y[0] - p[0]), std::abs(y[1] - p[1])));
      }
      from_box = std::max(from_box, best);
    }
    const double got = directed_box_to_set(set, box);
    CHECK(got >= from_box - 1e-12);
    CHECK(got <= from_box + 3.0 / m + 1e-12);
  }
}

TEST_CASE("projection error bound on random boxes") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> len(0.0, 3.0);
  std::uniform_real_distribution<double> res(0.01, 2.0);
  for (int c = 0; c < 100; ++c) {
    const std::size_t d = 1 + c % 3;
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = pos(rng);
      hi[i] = lo[i] + len(rng);
    }
    const Box box(lo, hi);
    const double rho = res(rng);
    const LatticeSet s = project_box(box, rho);
    REQUIRE_FALSE(s.empty());
    CHECK(hausdorff_to_box(s, box) <= rho / 2 + 1e-12);
  }
}

TEST_CASE("point output") {
  std::ostringstream os;
  write_points(os, LatticeSet::from_indices(0.5, 2, {1, 2, 3, 4, 5, 6}), 2);
  CHECK(os.str() == "# rho 0.5 d 2 points 3 stride 2\n1 2\n5 6\n");
}
