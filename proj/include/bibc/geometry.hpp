// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bibc {

/// Planar position in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle, used both for the coverage area and for the
/// uncertainty region the backscatter device is known to lie in.
class Rectangle {
 public:
  Rectangle(Point center, double width, double height);

  [[nodiscard]] Point center() const { return center_; }
  [[nodiscard]] double width() const { return width_; }
  [[nodiscard]] double height() const { return height_; }
  [[nodiscard]] double min_x() const { return center_.x - 0.5 * width_; }
  [[nodiscard]] double max_x() const { return center_.x + 0.5 * width_; }
  [[nodiscard]] double min_y() const { return center_.y - 0.5 * height_; }
  [[nodiscard]] double max_y() const { return center_.y + 0.5 * height_; }
  [[nodiscard]] double perimeter() const { return 2.0 * (width_ + height_); }

  [[nodiscard]] bool contains(Point p, double tol = 0.0) const;
  /// True when p lies on the perimeter within `tol`.
  [[nodiscard]] bool on_boundary(Point p, double tol) const;
  /// Euclidean projection onto the rectangle (coordinate-wise clamp).
  [[nodiscard]] Point clamp(Point p) const;
  /// True when `inner` lies entirely inside this rectangle.
  [[nodiscard]] bool encloses(const Rectangle& inner) const;

 private:
  Point center_;
  double width_;
  double height_;
};

/// K multi-antenna APs scattered over a coverage area.
class Deployment {
 public:
  /// Throws InvalidArgument unless K >= 2, positions are distinct and finite,
  /// and antennas_per_ap >= 1.
  Deployment(std::vector<Point> ap_positions, int antennas_per_ap, Rectangle coverage);

  [[nodiscard]] std::size_t size() const { return aps_.size(); }
  [[nodiscard]] const Point& ap(std::size_t i) const { return aps_.at(i); }
  [[nodiscard]] std::span<const Point> aps() const { return aps_; }
  [[nodiscard]] int antennas() const { return antennas_; }
  [[nodiscard]] const Rectangle& coverage() const { return coverage_; }

 private:
  std::vector<Point> aps_;
  int antennas_;
  Rectangle coverage_;
};

double squared_distance(Point a, Point b);
double distance(Point a, Point b);

/// Free-space LOS path gain 1/d^2. Throws GeometryError at zero distance.
double path_gain(Point ap, Point bd);

/// Index of the AP closest to `p`. Equidistant APs resolve to the lowest index.
std::size_t nearest_ap(std::span<const Point> aps, Point p);
std::size_t nearest_ap(const Deployment& dep, Point p);

/// Indices of all APs sorted by distance to `p`, ties by index.
std::vector<std::size_t> aps_by_distance(std::span<const Point> aps, Point p);

/// Points on the perimeter, counter-clockwise from the lower-left corner.
/// Each edge is split into ceil(length/step) equal segments, so neighbours
/// are at most `step` apart and every corner appears exactly once.
/// Requires 0 < step <= min(width, height).
std::vector<Point> boundary_points(const Rectangle& r, double step);

/// Centroids of an nx-by-ny uniform partition, row-major from the lower-left
/// cell (x varies fastest).
std::vector<Point> partition_centroids(const Rectangle& r, int nx, int ny);

}  // namespace bibc
