// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bibc {

/// Bad argument value or malformed input document.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Geometry the free-space model cannot handle: a device co-located with an
/// AP, or a region that does not fit inside the coverage area.
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace bibc
