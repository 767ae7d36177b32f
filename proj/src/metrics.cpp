// SPDX-License-Identifier: Apache-2.0
#include "bibc/metrics.hpp"

#include <algorithm>

#include "bibc/error.hpp"

namespace bibc {

void validate_ce_set(const Deployment& dep, std::span<const std::size_t> ce_set) {
  if (ce_set.empty()) throw InvalidArgument("CE set must not be empty");
  for (std::size_t i = 0; i < ce_set.size(); ++i) {
    if (ce_set[i] >= dep.size()) throw InvalidArgument("CE index out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (ce_set[i] == ce_set[j]) throw InvalidArgument("CE indices must be distinct");
    }
  }
}

double link_gain_sum(const Deployment& dep, Point bd, std::span<const Link> links) {
  double sum = 0.0;
  for (const auto& l : links) {
    if (l.ce == l.reader) throw InvalidArgument("a link needs distinct CE and reader");
    sum += path_gain(dep.ap(l.ce), bd) * path_gain(dep.ap(l.reader), bd);
  }
  return sum;
}

double lambda1(const Deployment& dep, Point bd, std::span<const std::size_t> ce_set) {
  validate_ce_set(dep, ce_set);
  double sum = 0.0;
  for (const std::size_t t : ce_set) {
    const double bt = path_gain(dep.ap(t), bd);
    for (std::size_t r = 0; r < dep.size(); ++r) {
      if (r != t) sum += bt * path_gain(dep.ap(r), bd);
    }
  }
  return sum;
}

double lambda2(const Deployment& dep, Point bd, int slots) {
  if (slots < 1) throw InvalidArgument("slot count T must be >= 1");
  const std::size_t nearest = nearest_ap(dep, bd);
  double readers = 0.0;
  for (std::size_t r = 0; r < dep.size(); ++r) {
    if (r != nearest) readers += path_gain(dep.ap(r), bd);
  }
  return slots * path_gain(dep.ap(nearest), bd) * readers;
}

double lambda3(const Deployment& dep, Point bd, std::span<const std::size_t> ce_set) {
  validate_ce_set(dep, ce_set);
  if (ce_set.size() >= dep.size()) throw InvalidArgument("Case 3 needs at least one reader");
  double sum = 0.0;
  for (const std::size_t t : ce_set) {
    const double bt = path_gain(dep.ap(t), bd);
    for (std::size_t r = 0; r < dep.size(); ++r) {
      if (std::find(ce_set.begin(), ce_set.end(), r) == ce_set.end()) {
        sum += bt * path_gain(dep.ap(r), bd);
      }
    }
  }
  return sum;
}

double pair_metric(const Deployment& dep, std::size_t t, std::size_t r, Point p) {
  if (t == r) throw InvalidArgument("CE and reader must differ");
  return path_gain(dep.ap(t), p) * path_gain(dep.ap(r), p);
}

double received_snr(const Deployment& dep, std::size_t t, std::size_t r, Point p,
                    double transmit_power, int slot_length) {
  return transmit_power * slot_length * dep.antennas() * pair_metric(dep, t, r, p);
}

}  // namespace bibc
