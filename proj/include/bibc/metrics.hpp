// SPDX-License-Identifier: Apache-2.0
#pragma once

// Geometry-only figures of merit for AP role assignment. All values are in
// 1/m^4; multiply by p_t tau_d M to get the summed received SNR.

#include <cstddef>
#include <span>
#include <vector>

#include "bibc/geometry.hpp"

namespace bibc {

/// One CE-to-reader observation.
struct Link {
  std::size_t ce;
  std::size_t reader;

  friend bool operator==(const Link&, const Link&) = default;
};

/// sum over links of 1/(d_ce^2 d_reader^2) at `bd`.
double link_gain_sum(const Deployment& dep, Point bd, std::span<const Link> links);

/// Rotating CEs: each CE in turn, every other AP reads (idle CEs included).
double lambda1(const Deployment& dep, Point bd, std::span<const std::size_t> ce_set);

/// The AP nearest to `bd` transmits in all `slots` slots; all others read.
double lambda2(const Deployment& dep, Point bd, int slots);

/// Simultaneous CEs on orthogonal sequences; only non-CE APs read.
/// Throws InvalidArgument when the CE set covers every AP.
double lambda3(const Deployment& dep, Point bd, std::span<const std::size_t> ce_set);

/// 1/(d_t^2 d_r^2); symmetric in (t, r).
double pair_metric(const Deployment& dep, std::size_t t, std::size_t r, Point p);

/// p_t tau_d M / (d_t^2 d_r^2), with M taken from the deployment.
double received_snr(const Deployment& dep, std::size_t t, std::size_t r, Point p,
                    double transmit_power, int slot_length);

void validate_ce_set(const Deployment& dep, std::span<const std::size_t> ce_set);

}  // namespace bibc
