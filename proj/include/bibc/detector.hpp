// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "bibc/channel.hpp"
#include "bibc/metrics.hpp"
#include "bibc/random.hpp"

namespace bibc {

enum class ReaderPolicy {
  AllOthers,   // every AP except the CE of the current slot reads
  Complement,  // only APs outside the CE set read
  Explicit,    // the listed readers; may not contain a CE
};

struct DetectorConfig {
  double gamma0 = 0.0;
  double gamma1 = 1.0;
  double prior0 = 0.5;
  double prior1 = 0.5;
  std::vector<std::size_t> ce_set{0};
  ReaderPolicy reader_policy = ReaderPolicy::AllOthers;
  std::vector<std::size_t> readers;  // Explicit policy only

  /// Throws InvalidArgument on gamma1 < gamma0, priors that are not a
  /// distribution, an empty/duplicate/out-of-range CE set, or a reader set
  /// that is empty or (Explicit) overlaps the CE set.
  void validate(std::size_t num_aps) const;

  /// Observed (CE, reader) links, CE-major in CE-set order, readers ascending.
  [[nodiscard]] std::vector<Link> links(std::size_t num_aps) const;

  [[nodiscard]] bool equal_priors() const { return prior0 == prior1; }
};

/// Standard normal tail probability, 0.5 erfc(x / sqrt 2).
double q_function(double x);

struct PeResult {
  double pe = 0.5;
  double argument = 0.0;
};

/// Pe = Q(gamma_gap * sqrt(link_energy / 2)), where link_energy is the sum
/// of ||A_{t,r}||^2 over all observed links.
PeResult pe_from_link_energy(double gamma_gap, double link_energy);

/// The geometry form of the same expression: under free-space LOS,
/// sum ||A||^2 = p_t tau_d M * metric, with metric a sum of 1/(d_t^2 d_r^2)
/// terms (Lambda1, Lambda3, a pair metric, ...). Every Pe reported by this
/// library goes through here.
PeResult pe_from_metric(double gamma_gap, double transmit_energy, int antennas, double metric);

/// Exact error probability from geometry alone (equal priors required).
PeResult closed_form_pe(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                        double transmit_energy);
PeResult closed_form_pe(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                        const ProbingSignal& phi);

/// Simultaneous CEs on orthogonal sequences; readers are the complement of
/// the CE set and the argument carries the extra T * eta factor.
PeResult closed_form_pe_case3(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                              const ProbingSignal& phi, const OrthogonalSequenceSet& seqs);

/// Noise-free parts of each observed block: the direct path G_{t,r} Phi and
/// the backscatter path A_{t,r} = g_r g_t^T Phi.
class LinkModel {
 public:
  LinkModel(const ChannelRealization& real, const ProbingSignal& phi, std::vector<Link> links);

  [[nodiscard]] const std::vector<Link>& links() const { return links_; }
  [[nodiscard]] const CMatrix& direct(std::size_t i) const { return direct_[i]; }
  [[nodiscard]] const CMatrix& backscatter(std::size_t i) const { return backscatter_[i]; }
  /// sum ||A_{t,r}||^2
  [[nodiscard]] double energy() const { return energy_; }
  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }

 private:
  std::vector<Link> links_;
  std::vector<CMatrix> direct_;
  std::vector<CMatrix> backscatter_;
  double energy_ = 0.0;
  int rows_ = 0;
  int cols_ = 0;
};

/// One M x tau_d block Y_{t,r} per link.
struct ReceivedBlocks {
  std::vector<Link> links;
  std::vector<CMatrix> blocks;
};

/// Y = G Phi + gamma_bit g_r g_t^T Phi + noise_scale * W, W i.i.d. CN(0,1).
/// noise_scale = 0 gives the noiseless observation.
ReceivedBlocks simulate_received(const ChannelRealization& real, const ProbingSignal& phi,
                                 const DetectorConfig& cfg, int bit, std::uint64_t seed,
                                 double noise_scale = 1.0);
ReceivedBlocks simulate_received(const LinkModel& model, const DetectorConfig& cfg, int bit,
                                 Engine& eng, double noise_scale = 1.0);

struct TestStatistic {
  double llr = 0.0;        // sum Re Tr{A Y'^H}
  double threshold = 0.0;  // decide 1 iff llr > threshold
  int decision = 0;
};

/// MAP detector on the direct-path-cancelled blocks Y' = Y - G Phi.
/// With equal priors the threshold is (gamma1 + gamma0)/2 * sum ||A||^2.
TestStatistic llr_detect(const ReceivedBlocks& y, const ChannelRealization& real,
                         const ProbingSignal& phi, const DetectorConfig& cfg);
TestStatistic llr_detect(const ReceivedBlocks& y, const LinkModel& model,
                         const DetectorConfig& cfg, double noise_variance = 1.0);

/// Case-3 observations: per reader r (ascending, outside the CE set) and per
/// slot l, Y_r^l = sum_t c_t^l (G_{t,r} Phi + gamma g_r g_t^T Phi) + W_r^l.
struct SlotBlocks {
  std::vector<std::size_t> readers;
  std::vector<std::vector<CMatrix>> blocks;  // [reader][slot]
};

SlotBlocks simulate_received_case3(const ChannelRealization& real, const ProbingSignal& phi,
                                   const DetectorConfig& cfg, const OrthogonalSequenceSet& seqs,
                                   int bit, std::uint64_t seed, double noise_scale = 1.0);

/// Correlates each reader's slots with every CE's sequence, which separates
/// the CEs, then runs the LLR test on the separated blocks.
TestStatistic detect_case3(const SlotBlocks& y, const ChannelRealization& real,
                           const ProbingSignal& phi, const DetectorConfig& cfg,
                           const OrthogonalSequenceSet& seqs);

struct BerEstimate {
  double ber = 0.0;
  double half_width = 0.0;  // 95% normal-approximation interval
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
};

/// Equiprobable bits, one channel realization, full simulate/detect per
/// trial. Trials are grouped into fixed blocks with their own streams, so
/// the estimate does not depend on `workers`.
BerEstimate monte_carlo_ber(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                            const ProbingSignal& phi, std::uint64_t trials, std::uint64_t seed,
                            unsigned workers = 1);

BerEstimate monte_carlo_ber_case3(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                                  const ProbingSignal& phi, const OrthogonalSequenceSet& seqs,
                                  std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace bibc
