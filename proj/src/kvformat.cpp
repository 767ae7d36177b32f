// SPDX-License-Identifier: Apache-2.0
#include "bibc/kvformat.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bibc/error.hpp"

namespace bibc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, const std::string& key) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw InvalidArgument("key '" + key + "': '" + t + "' is not a number");
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

KeyValueDocument KeyValueDocument::parse(std::istream& in) {
  KeyValueDocument doc;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InvalidArgument("line " + std::to_string(lineno) + ": empty key");
    if (doc.has(key)) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    doc.values_[key] = value;
  }
  return doc;
}

KeyValueDocument KeyValueDocument::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

KeyValueDocument KeyValueDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return parse(in);
}

const std::string& KeyValueDocument::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("missing key '" + key + "'");
  return it->second;
}

double KeyValueDocument::number(const std::string& key) const {
  return parse_double(raw(key), key);
}

double KeyValueDocument::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long KeyValueDocument::integer(const std::string& key) const {
  const double v = number(key);
  if (std::trunc(v) != v || std::abs(v) > 9.0e15) {
    throw InvalidArgument("key '" + key + "' must be an integer");
  }
  return static_cast<long long>(v);
}

long long KeyValueDocument::integer_or(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::vector<double> KeyValueDocument::numbers(const std::string& key) const {
  std::string v = raw(key);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw InvalidArgument("key '" + key + "' must be a bracketed list");
  }
  v = trim(v.substr(1, v.size() - 2));
  std::vector<double> out;
  if (v.empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
  return out;
}

void KeyValueDocument::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void KeyValueDocument::set_number(const std::string& key, double value) {
  values_[key] = format_number(value);
}

void KeyValueDocument::set_numbers(const std::string& key, const std::vector<double>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    s += format_number(values[i]);
  }
  s += "]";
  values_[key] = s;
}

std::string KeyValueDocument::to_string() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

Deployment deployment_from_document(const KeyValueDocument& doc) {
  const auto xs = doc.numbers("ap_x");
  const auto ys = doc.numbers("ap_y");
  if (xs.size() != ys.size()) throw InvalidArgument("ap_x and ap_y differ in length");
  const auto cov = doc.numbers("coverage");
  if (cov.size() != 4) throw InvalidArgument("coverage must be [cx, cy, width, height]");
  std::vector<Point> aps;
  aps.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) aps.push_back({xs[i], ys[i]});
  const long long m = doc.integer("antennas_per_ap");
  if (m < 1 || m > 1 << 20) throw InvalidArgument("antennas_per_ap out of range");
  return Deployment(std::move(aps), static_cast<int>(m),
                    Rectangle({cov[0], cov[1]}, cov[2], cov[3]));
}

KeyValueDocument deployment_to_document(const Deployment& dep) {
  KeyValueDocument doc;
  std::vector<double> xs, ys;
  for (const auto& p : dep.aps()) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto& c = dep.coverage();
  doc.set_number("antennas_per_ap", dep.antennas());
  doc.set_numbers("coverage", {c.center().x, c.center().y, c.width(), c.height()});
  doc.set_numbers("ap_x", xs);
  doc.set_numbers("ap_y", ys);
  return doc;
}

Rectangle region_from_document(const KeyValueDocument& doc) {
  const auto c = doc.numbers("region_center");
  const auto s = doc.numbers("region_size");
  if (c.size() != 2 || s.size() != 2) {
    throw InvalidArgument("region_center and region_size must each hold two numbers");
  }
  return Rectangle({c[0], c[1]}, s[0], s[1]);
}

KeyValueDocument region_to_document(const Rectangle& region) {
  KeyValueDocument doc;
  doc.set_numbers("region_center", {region.center().x, region.center().y});
  doc.set_numbers("region_size", {region.width(), region.height()});
  return doc;
}

}  // namespace bibc
