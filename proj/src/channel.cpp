// SPDX-License-Identifier: Apache-2.0
#include "bibc/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "bibc/error.hpp"
#include "bibc/random.hpp"

namespace bibc {
namespace {

// Unitary DFT entry exp(-2 pi i k l / n) / sqrt(n); the index product is
// reduced mod n first so large n keeps full phase accuracy.
std::complex<double> dft_entry(long long k, long long l, long long n) {
  const long long m = (k * l) % n;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
  return std::polar(1.0 / std::sqrt(static_cast<double>(n)), angle);
}

}  // namespace

ProbingSignal::ProbingSignal(CMatrix phi, double transmit_power)
    : phi_(std::move(phi)), power_(transmit_power) {
  if (phi_.rows() < 1 || phi_.cols() < phi_.rows()) {
    throw InvalidArgument("probing signal needs tau_d >= M >= 1");
  }
  if (!(power_ > 0.0)) throw InvalidArgument("transmit power must be positive");
}

ProbingSignal make_probing_signal(int antennas, int slot_length, double transmit_power) {
  if (antennas < 1) throw InvalidArgument("M must be >= 1");
  if (slot_length < antennas) throw InvalidArgument("slot length tau_d must be >= M");
  if (!(transmit_power > 0.0) || !std::isfinite(transmit_power)) {
    throw InvalidArgument("transmit power must be positive and finite");
  }
  const double scale = std::sqrt(transmit_power * slot_length / antennas);
  CMatrix phi(antennas, slot_length);
  for (int k = 0; k < antennas; ++k) {
    for (int l = 0; l < slot_length; ++l) phi(k, l) = scale * dft_entry(k, l, slot_length);
  }
  return ProbingSignal(std::move(phi), transmit_power);
}

ProbingSignal probing_signal_for_snr(int antennas, int slot_length, double snr_db) {
  const double energy = std::pow(10.0, snr_db / 10.0);
  return make_probing_signal(antennas, slot_length, energy / slot_length);
}

ChannelRealization::ChannelRealization(Deployment dep, Point bd, std::vector<CVector> bd_channels,
                                       std::vector<CMatrix> inter_ap)
    : dep_(std::move(dep)), bd_(bd), g_(std::move(bd_channels)), upper_(std::move(inter_ap)) {
  const std::size_t k = dep_.size();
  if (g_.size() != k || upper_.size() != k * (k - 1) / 2) {
    throw InvalidArgument("channel realization does not match the deployment size");
  }
}

std::size_t ChannelRealization::pair_slot(std::size_t lo, std::size_t hi) const {
  const std::size_t k = g_.size();
  // Pairs (0,1),(0,2),...,(0,k-1),(1,2),...
  return lo * k - lo * (lo + 1) / 2 + (hi - lo - 1);
}

CMatrix ChannelRealization::inter_ap(std::size_t t, std::size_t r) const {
  if (t == r || t >= g_.size() || r >= g_.size()) {
    throw InvalidArgument("inter-AP channel needs two distinct valid AP indices");
  }
  if (t < r) return upper_[pair_slot(t, r)];
  return upper_[pair_slot(r, t)].transpose();
}

ChannelRealization synthesize_channels(const Deployment& dep, Point bd, std::uint64_t seed) {
  const std::size_t k = dep.size();
  const int m = dep.antennas();
  auto eng = make_stream(seed, 0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  std::vector<CVector> g;
  g.reserve(k);
  for (std::size_t t = 0; t < k; ++t) {
    const double amp = std::sqrt(path_gain(dep.ap(t), bd));
    CVector v(m);
    for (int i = 0; i < m; ++i) v(i) = std::polar(amp, phase(eng));
    g.push_back(std::move(v));
  }

  std::vector<CMatrix> upper;
  upper.reserve(k * (k - 1) / 2);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t r = t + 1; r < k; ++r) {
      const double amp = std::sqrt(path_gain(dep.ap(t), dep.ap(r)));
      CMatrix h(m, m);
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) h(i, j) = std::polar(amp, phase(eng));
      }
      upper.push_back(std::move(h));
    }
  }
  return ChannelRealization(dep, bd, std::move(g), std::move(upper));
}

OrthogonalSequenceSet make_orthogonal_sequences(int slots) {
  if (slots < 1) throw InvalidArgument("sequence length T must be >= 1");
  OrthogonalSequenceSet set;
  set.coefficients.resize(slots, slots);
  for (int t = 0; t < slots; ++t) {
    for (int l = 0; l < slots; ++l) set.coefficients(t, l) = dft_entry(t, l, slots);
  }
  // T=2 gives rows (1,1)/sqrt2 and (1,-1)/sqrt2 up to rounding; snap the
  // real-valued cases so the +/- pattern is exact.
  for (int t = 0; t < slots; ++t) {
    for (int l = 0; l < slots; ++l) {
      auto& c = set.coefficients(t, l);
      if (std::abs(c.imag()) < 1e-15) c = {c.real(), 0.0};
      if (std::abs(c.real()) < 1e-15) c = {0.0, c.imag()};
    }
  }
  set.power_coefficient = 1.0 / slots;
  return set;
}

}  // namespace bibc
