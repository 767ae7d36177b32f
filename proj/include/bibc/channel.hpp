// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bibc/geometry.hpp"

namespace bibc {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Orthogonal probing block Phi (M x tau_d) with Phi Phi^H = (p_t tau_d / M) I.
class ProbingSignal {
 public:
  ProbingSignal(CMatrix phi, double transmit_power);

  [[nodiscard]] const CMatrix& matrix() const { return phi_; }
  [[nodiscard]] int antennas() const { return static_cast<int>(phi_.rows()); }
  [[nodiscard]] int slot_length() const { return static_cast<int>(phi_.cols()); }
  [[nodiscard]] double transmit_power() const { return power_; }
  /// E_p = ||Phi||^2 = p_t tau_d, which is also the transmit SNR under
  /// unit-variance noise.
  [[nodiscard]] double energy() const { return power_ * slot_length(); }

 private:
  CMatrix phi_;
  double power_;
};

/// First M rows of the tau_d-point unitary DFT, scaled by sqrt(p_t tau_d / M).
ProbingSignal make_probing_signal(int antennas, int slot_length, double transmit_power);

/// Probing signal whose energy p_t tau_d equals the given transmit SNR (dB).
ProbingSignal probing_signal_for_snr(int antennas, int slot_length, double snr_db);

/// Channels for one deployment and one device position. Entries have the
/// free-space magnitude sqrt(beta) and i.i.d. uniform phases; the
/// inter-AP matrices are stored once per unordered pair and transposed on
/// access, which makes reciprocity exact.
class ChannelRealization {
 public:
  ChannelRealization(Deployment dep, Point bd, std::vector<CVector> bd_channels,
                     std::vector<CMatrix> inter_ap);

  [[nodiscard]] const Deployment& deployment() const { return dep_; }
  [[nodiscard]] Point bd_position() const { return bd_; }
  [[nodiscard]] std::size_t num_aps() const { return g_.size(); }
  /// g_t (M x 1): AP t to the backscatter device.
  [[nodiscard]] const CVector& bd_channel(std::size_t t) const { return g_.at(t); }
  /// G_{t,r} (M x M). G_{r,t} is returned as the exact transpose of G_{t,r}.
  [[nodiscard]] CMatrix inter_ap(std::size_t t, std::size_t r) const;

 private:
  [[nodiscard]] std::size_t pair_slot(std::size_t lo, std::size_t hi) const;

  Deployment dep_;
  Point bd_;
  std::vector<CVector> g_;
  std::vector<CMatrix> upper_;  // G_{t,r} for t < r, row-major over pairs
};

ChannelRealization synthesize_channels(const Deployment& dep, Point bd, std::uint64_t seed);

/// T x T sequence set: row t holds c_t^1..c_t^T, |c_t^l|^2 = eta = 1/T.
struct OrthogonalSequenceSet {
  CMatrix coefficients;
  double power_coefficient = 1.0;

  [[nodiscard]] int slots() const { return static_cast<int>(coefficients.cols()); }
};

OrthogonalSequenceSet make_orthogonal_sequences(int slots);

}  // namespace bibc
