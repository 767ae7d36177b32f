// SPDX-License-Identifier: Apache-2.0
#include "bibc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bibc/error.hpp"

namespace bibc {

Rectangle::Rectangle(Point center, double width, double height)
    : center_(center), width_(width), height_(height) {
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) {
    throw InvalidArgument("rectangle center must be finite");
  }
  if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height)) {
    throw InvalidArgument("rectangle width and height must be positive");
  }
}

bool Rectangle::contains(Point p, double tol) const {
  return p.x >= min_x() - tol && p.x <= max_x() + tol && p.y >= min_y() - tol &&
         p.y <= max_y() + tol;
}

bool Rectangle::on_boundary(Point p, double tol) const {
  if (!contains(p, tol)) return false;
  return std::abs(p.x - min_x()) <= tol || std::abs(p.x - max_x()) <= tol ||
         std::abs(p.y - min_y()) <= tol || std::abs(p.y - max_y()) <= tol;
}

Point Rectangle::clamp(Point p) const {
  return {std::clamp(p.x, min_x(), max_x()), std::clamp(p.y, min_y(), max_y())};
}

bool Rectangle::encloses(const Rectangle& inner) const {
  return inner.min_x() >= min_x() && inner.max_x() <= max_x() && inner.min_y() >= min_y() &&
         inner.max_y() <= max_y();
}

Deployment::Deployment(std::vector<Point> ap_positions, int antennas_per_ap, Rectangle coverage)
    : aps_(std::move(ap_positions)), antennas_(antennas_per_ap), coverage_(coverage) {
  if (aps_.size() < 2) throw InvalidArgument("a deployment needs at least two APs");
  if (antennas_ < 1) throw InvalidArgument("antennas per AP must be >= 1");
  for (std::size_t i = 0; i < aps_.size(); ++i) {
    if (!std::isfinite(aps_[i].x) || !std::isfinite(aps_[i].y)) {
      throw InvalidArgument("AP " + std::to_string(i) + " has a non-finite coordinate");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (aps_[i] == aps_[j]) {
        throw InvalidArgument("APs " + std::to_string(j) + " and " + std::to_string(i) +
                              " share a position");
      }
    }
  }
}

double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_gain(Point ap, Point bd) {
  const double d2 = squared_distance(ap, bd);
  if (d2 == 0.0) throw GeometryError("backscatter device is co-located with an AP");
  return 1.0 / d2;
}

std::size_t nearest_ap(std::span<const Point> aps, Point p) {
  std::size_t best = 0;
  double best_d2 = squared_distance(aps[0], p);
  for (std::size_t i = 1; i < aps.size(); ++i) {
    const double d2 = squared_distance(aps[i], p);
    if (d2 < best_d2) {
      best = i;
      best_d2 = d2;
    }
  }
  return best;
}

std::size_t nearest_ap(const Deployment& dep, Point p) { return nearest_ap(dep.aps(), p); }

std::vector<std::size_t> aps_by_distance(std::span<const Point> aps, Point p) {
  std::vector<std::size_t> order(aps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> d2(aps.size());
  for (std::size_t i = 0; i < aps.size(); ++i) d2[i] = squared_distance(aps[i], p);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });
  return order;
}

std::vector<Point> boundary_points(const Rectangle& r, double step) {
  if (!(step > 0.0)) throw InvalidArgument("boundary step must be positive");
  if (step > std::min(r.width(), r.height())) {
    throw InvalidArgument("boundary step exceeds the shorter rectangle side");
  }
  const auto segments = [step](double length) {
    // Guard against 5/0.25 landing at 20.000000000000004.
    return std::max(1, static_cast<int>(std::ceil(length / step - 1e-9)));
  };
  const int nx = segments(r.width());
  const int ny = segments(r.height());
  const double x0 = r.min_x(), x1 = r.max_x(), y0 = r.min_y(), y1 = r.max_y();
  const auto lerp = [](double a, double b, int i, int n) {
    return i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  };

  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(2 * (nx + ny)));
  for (int i = 0; i < nx; ++i) pts.push_back({lerp(x0, x1, i, nx), y0});  // bottom
  for (int i = 0; i < ny; ++i) pts.push_back({x1, lerp(y0, y1, i, ny)});  // right
  for (int i = 0; i < nx; ++i) pts.push_back({lerp(x1, x0, i, nx), y1});  // top
  for (int i = 0; i < ny; ++i) pts.push_back({x0, lerp(y1, y0, i, ny)});  // left
  return pts;
}

std::vector<Point> partition_centroids(const Rectangle& r, int nx, int ny) {
  if (nx < 1 || ny < 1) throw InvalidArgument("partition counts must be >= 1");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  const double dx = r.width() / nx;
  const double dy = r.height() / ny;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      pts.push_back({r.min_x() + (i + 0.5) * dx, r.min_y() + (j + 0.5) * dy});
    }
  }
  return pts;
}

}  // namespace bibc
