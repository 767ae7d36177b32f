// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bibc/error.hpp"
#include "bibc/metrics.hpp"
#include "bibc/selection.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace bibc;
using bibc::testing::rel_err;
using bibc::testing::square;

namespace {

// Independent max-min over every ordered pair, on the same boundary grid.
std::pair<double, std::pair<std::size_t, std::size_t>> brute_pair(const Deployment& d,
                                                                   const Rectangle& region,
                                                                   double step) {
  const auto pts = boundary_points(region, step);
  double best = -1;
  std::pair<std::size_t, std::size_t> arg{0, 0};
  for (std::size_t t = 0; t < d.size(); ++t) {
    for (std::size_t r = 0; r < d.size(); ++r) {
      if (r == t) continue;
      double worst = std::numeric_limits<double>::infinity();
      for (auto p : pts) {
        if (distance(p, d.ap(t)) < step || distance(p, d.ap(r)) < step) continue;
        worst = std::min(worst, pair_metric(d, t, r, p));
      }
      if (worst > best) {
        best = worst;
        arg = {t, r};
      }
    }
  }
  return {best, arg};
}

std::pair<std::size_t, std::size_t> unordered(std::size_t a, std::size_t b) {
  return {std::min(a, b), std::max(a, b)};
}

}  // namespace

TEST_CASE("single-CE objective value and gradient") {
  const Deployment sym({{-1, 0}, {1, 0}}, 1, square(0, 0, 4));
  auto e = opc1_objective(sym, 0, {0, 0});
  CHECK(e.value == doctest::Approx(1.0));
  CHECK(std::abs(e.gradient.x) < 1e-15);
  CHECK_THROWS_AS(opc1_objective(sym, 0, {1, 0}), GeometryError);

  std::mt19937_64 eng(31);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    auto dep = bibc::testing::random_deployment(8, 20.0, 1, eng);
    const std::size_t t = i % 8;
    const Point p{std::uniform_real_distribution<double>(0, 20)(eng),
                  std::uniform_real_distribution<double>(0, 20)(eng)};
    const auto ev = opc1_objective(dep, t, p);
    if (nearest_ap(dep, p) == t) CHECK(rel_err(ev.value, lambda2(dep, p, 1)) < 1e-12);
    const std::vector<std::size_t> ce{t};
    CHECK(rel_err(ev.value, lambda1(dep, p, ce)) < 1e-12);
    const double fx = (opc1_objective(dep, t, {p.x + h, p.y}).value -
                       opc1_objective(dep, t, {p.x - h, p.y}).value) / (2 * h);
    const double fy = (opc1_objective(dep, t, {p.x, p.y + h}).value -
                       opc1_objective(dep, t, {p.x, p.y - h}).value) / (2 * h);
    const double gnorm = std::hypot(ev.gradient.x, ev.gradient.y);
    CHECK(std::hypot(fx - ev.gradient.x, fy - ev.gradient.y) / gnorm < 1e-5);
  }
}

TEST_CASE("PGD contracts") {
  PgdSettings s;
  CHECK_NOTHROW(s.validate());
  s.learning_rate = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = {};
  s.max_iterations = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = {};
  s.starts_x = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);

  std::mt19937_64 eng(37);
  for (int i = 0; i < 30; ++i) {
    auto dep = bibc::testing::random_deployment(20, 30.0, 8, eng);
    const Rectangle region({std::uniform_real_distribution<double>(2.5, 27.5)(eng),
                            std::uniform_real_distribution<double>(2.5, 27.5)(eng)},
                           5, 5);
    std::vector<std::vector<double>> per_start(16);
    bool inside = true;
    auto res = pgd_minimize(dep, i % 20, region, PgdSettings{}, [&](const PgdStep& st) {
      per_start[st.start].push_back(st.value);
      inside = inside && region.contains(st.point, 1e-12);
    });
    CHECK(inside);
    for (const auto& vals : per_start) {
      CHECK(!vals.empty());
      for (std::size_t j = 1; j < vals.size(); ++j) CHECK(vals[j] <= vals[j - 1]);
    }
    CHECK(region.contains(res.worst_point, 1e-12));
    CHECK(res.worst_value == opc1_objective(dep, i % 20, res.worst_point).value);
  }
}

TEST_CASE("PGD on a flat objective leaves the start unmoved") {
  const Deployment dep({{0, 0}, {1, 0}}, 1, square(0, 0, 1e7));
  const Rectangle far({1e6, 1e6}, 2, 2);
  PgdSettings s;
  s.starts_x = s.starts_y = 1;
  auto res = pgd_minimize(dep, 0, far, s);
  CHECK(distance(res.worst_point, far.center()) < 1e-6);
}

TEST_CASE("grid search") {
  const Deployment dep({{0, 0}, {9, 3}, {4, 12}}, 1, square(5, 5, 20));
  const Rectangle region({5, 5}, 2, 2);
  auto one = grid_search_min(dep, 0, region, 5.0);
  CHECK(one.evaluated == 1);
  CHECK(one.point == region.center());
  CHECK(region_lattice(region, 0.5).size() == 25);
  CHECK_THROWS_AS(grid_search_min(dep, 0, region, 0.0), InvalidArgument);

  std::mt19937_64 eng(41);
  for (int i = 0; i < 20; ++i) {
    auto d = bibc::testing::random_deployment(10, 30.0, 1, eng);
    const Rectangle r({15, 15}, 6, 4);
    double prev = std::numeric_limits<double>::infinity();
    for (double res : {1.0, 0.5, 0.25, 0.125}) {
      const auto g = grid_search_min(d, i % 10, r, res);
      CHECK(g.value <= prev);
      prev = g.value;
    }
  }
}

TEST_CASE("select_ce") {
  const Deployment two({{0, 0}, {10, 0}}, 1, square(5, 5, 20));
  const Rectangle mid({5, 5}, 2, 2);
  auto rep = select_ce(two, mid, PgdSettings{});
  CHECK(rep.best.ce_index == 0);
  CHECK(rep.candidates.size() == 2);
  CHECK(rep.candidates[0].worst_value == doctest::Approx(rep.candidates[1].worst_value));

  const Deployment col({{0, 0}, {100, 0}}, 1, square(50, 50, 200));
  const Rectangle near0({3, 3}, 2, 2);
  CHECK(select_ce(col, near0, PgdSettings{}).best.ce_index == 0);
  const auto g0 = grid_search_min(col, 0, near0, 0.05);
  const auto g1 = grid_search_min(col, 1, near0, 0.05);
  // two APs: the objective is role-symmetric, index 0 wins the tie
  CHECK(g0.value == doctest::Approx(g1.value).epsilon(1e-12));

  std::mt19937_64 eng(43);
  for (int i = 0; i < 10; ++i) {
    auto dep = bibc::testing::random_deployment(12, 30.0, 8, eng);
    const Rectangle region({std::uniform_real_distribution<double>(2.5, 27.5)(eng), 15.0}, 5, 5);
    auto a = select_ce(dep, region, PgdSettings{}, 1);
    auto b = select_ce(dep, region, PgdSettings{}, 4);
    CHECK(a.best.ce_index == b.best.ce_index);
    CHECK(a.best.worst_value == b.best.worst_value);
    for (const auto& c : a.candidates) CHECK(c.worst_value <= a.best.worst_value);
    auto grid = select_ce_grid(dep, region, 0.1, 2);
    for (const auto& c : grid.candidates) CHECK(c.worst_value <= grid.best.worst_value);
  }
}

TEST_CASE("boundary step default and gain table") {
  CHECK(default_boundary_step(square(0, 0, 5)) == doctest::Approx(0.05));
  CHECK(boundary_points(square(0, 0, 5), default_boundary_step(square(0, 0, 5))).size() == 400);
}

TEST_CASE("pair selection oracles") {
  const Deployment two({{0, 0}, {10, 0}}, 1, square(5, 5, 20));
  const Rectangle region({5, 5}, 2, 2);
  auto only = select_pair(two, region, 1, 0.1);
  auto bench = benchmark_pair(two, region, 0.1);
  CHECK(unordered(only.ce_index, only.reader_index) == unordered(bench.ce_index, bench.reader_index));
  CHECK(only.worst_value == bench.worst_value);
  CHECK_THROWS_AS(select_pair(two, region, 2, 0.1), InvalidArgument);
  CHECK_THROWS_AS(select_pair(two, region, 0, 0.1), InvalidArgument);

  // distances 1, 2, 3 from the centroid
  const Deployment line({{6, 0}, {0, 1}, {0, -2}, {3, 0}}, 1, square(0, 0, 20));
  const Rectangle c({0, 0}, 0.5, 0.5);
  auto b = benchmark_pair(line, c, 0.05);
  CHECK(unordered(b.ce_index, b.reader_index) == std::pair<std::size_t, std::size_t>{1, 2});

  std::mt19937_64 eng(47);
  for (int i = 0; i < 40; ++i) {
    const std::size_t k = 3 + i % 10;
    auto dep = bibc::testing::random_deployment(k, 30.0, 8, eng);
    const Rectangle r({std::uniform_real_distribution<double>(2.5, 27.5)(eng),
                       std::uniform_real_distribution<double>(2.5, 27.5)(eng)},
                      5, 5);
    const double step = default_boundary_step(r);
    const auto oracle = brute_pair(dep, r, step);
    const auto full = select_pair(dep, r, int(k) - 1, step);
    const auto ex = exhaustive_pair(dep, r, step);
    CHECK(full.worst_value == oracle.first);
    CHECK(ex.worst_value == oracle.first);
    CHECK(full.candidate_set.size() == k);
    const auto bench_i = benchmark_pair(dep, r, step);
    CHECK(bench_i.worst_value <= ex.worst_value);
    const auto k2 = select_pair(dep, r, 1, step);
    CHECK(k2.ce_index != k2.reader_index);
    CHECK(std::find(k2.candidate_set.begin(), k2.candidate_set.end(), nearest_ap(dep, r.center())) !=
          k2.candidate_set.end());
    CHECK(k2.worst_value <= ex.worst_value);
    // worst point lies on the boundary grid
    const auto pts = boundary_points(r, step);
    CHECK(std::find(pts.begin(), pts.end(), k2.worst_point) != pts.end());
    // the gain table gives the same answers
    const BoundaryGainTable table(dep, r, step);
    CHECK(select_pair(table, dep, r, 1).worst_value == k2.worst_value);
    CHECK(grid_search_pair_min(dep, ex.ce_index, ex.reader_index, r, step).value == ex.worst_value);
  }
}

TEST_CASE("pair result is stable under boundary refinement") {
  std::mt19937_64 eng(53);
  int same = 0, total = 0;
  for (int i = 0; i < 40; ++i) {
    auto dep = bibc::testing::random_deployment(20, 30.0, 8, eng);
    const Rectangle r({std::uniform_real_distribution<double>(2.5, 27.5)(eng),
                       std::uniform_real_distribution<double>(2.5, 27.5)(eng)},
                      5, 5);
    const double step = default_boundary_step(r);
    const auto coarse = select_pair(dep, r, 2, step);
    const auto fine = select_pair(dep, r, 2, step / 4);
    // the finer grid can only lower a pair's minimum, and by less than 1%
    CHECK(fine.worst_value <= coarse.worst_value * (1 + 1e-12));
    CHECK(fine.worst_value >= 0.99 * coarse.worst_value);
    same += unordered(coarse.ce_index, coarse.reader_index) ==
            unordered(fine.ce_index, fine.reader_index);
    ++total;
  }
  CHECK(same >= total - 2);
}

TEST_CASE("snr gap") {
  CHECK(snr_gap_db(3.0, 3.0) == 0.0);
  CHECK(snr_gap_db(10.0, 1.0) == doctest::Approx(10.0));
  CHECK(snr_gap_db(1.86, 1.0) == doctest::Approx(2.695129442179163).epsilon(1e-14));
  CHECK(snr_gap_db(2.0, 7.0) == doctest::Approx(-snr_gap_db(7.0, 2.0)));
  CHECK_THROWS_AS(snr_gap_db(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(snr_gap_db(1.0, -1.0), InvalidArgument);
}
