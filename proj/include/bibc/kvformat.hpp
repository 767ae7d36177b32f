// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plain-text key-value documents:
//
//   # comment
//   antennas_per_ap = 8
//   ap_x = [0.0, 10.0, 20.5]
//
// One `key = value` per line. A value is a number, a bare word, or a
// bracketed comma-separated list of numbers. Keys are unique.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bibc/geometry.hpp"

namespace bibc {

class KeyValueDocument {
 public:
  static KeyValueDocument parse(std::istream& in);
  static KeyValueDocument parse_string(const std::string& text);
  static KeyValueDocument load(const std::string& path);

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] const std::string& raw(const std::string& key) const;

  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number_or(const std::string& key, double fallback) const;
  [[nodiscard]] long long integer(const std::string& key) const;
  [[nodiscard]] long long integer_or(const std::string& key, long long fallback) const;
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set_number(const std::string& key, double value);
  void set_numbers(const std::string& key, const std::vector<double>& values);

  /// Serializes in key order. Numbers use shortest round-trip formatting.
  [[nodiscard]] std::string to_string() const;

 private:
  std::map<std::string, std::string> values_;
};

std::string format_number(double v);

// Deployment keys: antennas_per_ap, coverage = [cx, cy, w, h], ap_x, ap_y.
Deployment deployment_from_document(const KeyValueDocument& doc);
KeyValueDocument deployment_to_document(const Deployment& dep);

// Region keys: region_center = [x, y], region_size = [w, h].
Rectangle region_from_document(const KeyValueDocument& doc);
KeyValueDocument region_to_document(const Rectangle& region);

}  // namespace bibc
