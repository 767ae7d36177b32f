// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <random>

#include "bibc/error.hpp"
#include "bibc/geometry.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace bibc;
using bibc::testing::square;

TEST_CASE("distance") {
  CHECK(distance({0, 0}, {0, 0}) == 0.0);
  CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  // sqrt(12.5) frozen from an arbitrary-precision evaluation
  CHECK(distance({7.5, 7.5}, {10, 10}) == doctest::Approx(3.5355339059327376).epsilon(1e-15));
}

TEST_CASE("path gain is inverse square") {
  CHECK(path_gain({0, 0}, {1, 0}) == 1.0);
  CHECK(path_gain({0, 0}, {2, 0}) == 0.25);
  CHECK(path_gain({0, 0}, {0, 10}) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK_THROWS_AS(path_gain({1, 1}, {1, 1}), GeometryError);

  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int i = 0; i < 200; ++i) {
    const double d = u(eng);
    CHECK(path_gain({0, 0}, {d, 0}) * d * d == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(path_gain({0, 0}, {d * 1.01, 0}) < path_gain({0, 0}, {d, 0}));
  }
}

TEST_CASE("nearest ap") {
  const std::vector<Point> two{{0, 0}, {10, 0}};
  CHECK(nearest_ap(two, {1, 0}) == 0);
  CHECK(nearest_ap(two, {5, 0}) == 0);
  const std::vector<Point> three{{0, 0}, {4, 0}, {9, 1}};
  CHECK(nearest_ap(three, {8, 1}) == 2);

  std::mt19937_64 eng(5);
  for (int i = 0; i < 100; ++i) {
    auto aps = bibc::testing::random_aps(12, 20.0, eng);
    Point p{std::uniform_real_distribution<double>(0, 20)(eng), 7.0};
    const auto k = nearest_ap(aps, p);
    for (const auto& a : aps) CHECK(distance(aps[k], p) <= distance(a, p));
  }
}

TEST_CASE("deployment validation") {
  const auto cov = square(5, 5, 10);
  CHECK_THROWS_AS(Deployment({{0, 0}}, 1, cov), InvalidArgument);
  CHECK_THROWS_AS(Deployment({{0, 0}, {0, 0}}, 1, cov), InvalidArgument);
  CHECK_THROWS_AS(Deployment({{0, 0}, {1, 0}}, 0, cov), InvalidArgument);
  CHECK_THROWS_AS(Deployment({{0, 0}, {NAN, 0}}, 1, cov), InvalidArgument);
  CHECK_THROWS(Rectangle({0, 0}, 0, 1));
  const Deployment d({{0, 0}, {1, 0}}, 4, cov);
  CHECK(d.size() == 2);
  CHECK(d.antennas() == 4);
}

TEST_CASE("boundary points") {
  const auto unit = square(0.5, 0.5, 1);
  auto corners = boundary_points(unit, 1.0);
  CHECK(corners.size() == 4);
  CHECK(boundary_points(unit, 0.5).size() == 8);
  CHECK(boundary_points(square(0, 0, 5), 0.25).size() == 80);
  CHECK_THROWS(boundary_points(unit, 0.0));
  CHECK_THROWS(boundary_points(unit, -1.0));
  CHECK_THROWS(boundary_points(unit, 2.0));

  const Rectangle r({3, -2}, 7.3, 2.9);
  const auto pts = boundary_points(r, 0.37);
  for (const auto& p : pts) {
    const double dx = std::min(std::abs(p.x - r.min_x()), std::abs(p.x - r.max_x()));
    const double dy = std::min(std::abs(p.y - r.min_y()), std::abs(p.y - r.max_y()));
    CHECK(std::min(dx, dy) < 1e-12);
    CHECK(r.contains(p, 1e-12));
  }
  // every corner exactly once, neighbours at most one step apart
  for (Point c : {Point{r.min_x(), r.min_y()}, Point{r.max_x(), r.min_y()},
                  Point{r.max_x(), r.max_y()}, Point{r.min_x(), r.max_y()}}) {
    CHECK(std::count_if(pts.begin(), pts.end(),
                        [&](Point p) { return distance(p, c) < 1e-12; }) == 1);
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(distance(pts[i], pts[(i + 1) % pts.size()]) <= 0.37 + 1e-12);
}

TEST_CASE("partition centroids") {
  auto one = partition_centroids(square(0, 0, 1), 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Point{0, 0});

  auto four = partition_centroids(square(0.5, 0.5, 1), 2, 2);
  REQUIRE(four.size() == 4);
  CHECK(four[0].x == doctest::Approx(0.25));
  CHECK(four[0].y == doctest::Approx(0.25));
  CHECK(four[1].x == doctest::Approx(0.75));
  CHECK(four[2].y == doctest::Approx(0.75));
  CHECK(four[3].x == doctest::Approx(0.75));

  const auto r = square(5, 5, 10);
  auto sixteen = partition_centroids(r, 4, 4);
  REQUIRE(sixteen.size() == 16);
  CHECK(sixteen[1].x - sixteen[0].x == doctest::Approx(2.5));
  CHECK(sixteen[4].y - sixteen[0].y == doctest::Approx(2.5));
  for (const auto& p : sixteen) {
    CHECK(p.x > r.min_x());
    CHECK(p.x < r.max_x());
    CHECK(p.y > r.min_y());
    CHECK(p.y < r.max_y());
    // mirror image is also a centroid
    const Point m{2 * r.center().x - p.x, p.y};
    CHECK(std::any_of(sixteen.begin(), sixteen.end(),
                      [&](Point q) { return distance(q, m) < 1e-12; }));
  }
  CHECK_THROWS(partition_centroids(r, 0, 1));
}

TEST_CASE("rectangle clamp and containment") {
  const auto r = square(0, 0, 2);
  CHECK(r.clamp({5, -5}) == Point{1, -1});
  CHECK(r.contains({0.5, 0.5}));
  CHECK_FALSE(r.contains({1.5, 0}));
  CHECK(r.on_boundary({1, 0.3}, 1e-12));
  CHECK(square(5, 5, 10).encloses(square(2, 2, 4)));
  CHECK_FALSE(square(5, 5, 10).encloses(square(1, 1, 4)));
}
