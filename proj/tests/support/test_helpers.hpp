// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bibc/geometry.hpp"

namespace bibc::testing {

inline Rectangle square(double cx, double cy, double side) { return Rectangle({cx, cy}, side, side); }

// K distinct uniform APs over [0, side]^2.
inline std::vector<Point> random_aps(std::size_t k, double side, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<Point> aps;
  while (aps.size() < k) {
    Point p{u(eng), u(eng)};
    bool dup = false;
    for (const auto& q : aps) dup = dup || (q == p);
    if (!dup) aps.push_back(p);
  }
  return aps;
}

inline Deployment random_deployment(std::size_t k, double side, int m, std::mt19937_64& eng) {
  return Deployment(random_aps(k, side, eng), m, square(side / 2, side / 2, side));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Reference tail probability via std::erfc, independent of the library's Q.
inline double q_ref(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace bibc::testing
