// SPDX-License-Identifier: Apache-2.0
#include "bibc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bibc/error.hpp"

namespace bibc {
namespace {

constexpr std::uint64_t kTrialsPerBlock = 256;
constexpr double kZ95 = 1.959963984540054;

void check_bit(int bit) {
  if (bit != 0 && bit != 1) throw InvalidArgument("bit must be 0 or 1");
}

double gamma_for(const DetectorConfig& cfg, int bit) { return bit ? cfg.gamma1 : cfg.gamma0; }

// MAP threshold on sum Re Tr{A Y'^H} for CN(0, noise_variance) noise.
double map_threshold(const DetectorConfig& cfg, double energy, double noise_variance) {
  double eta = 0.5 * (cfg.gamma1 + cfg.gamma0) * energy;
  if (!cfg.equal_priors()) {
    const double gap = cfg.gamma1 - cfg.gamma0;
    const double log_ratio = std::log(cfg.prior0 / cfg.prior1);
    eta += gap > 0.0 ? noise_variance * log_ratio / (2.0 * gap)
                     : std::copysign(INFINITY, log_ratio);
  }
  return eta;
}

void add_noise(CMatrix& y, Engine& eng, double noise_scale) {
  if (noise_scale == 0.0) return;
  std::normal_distribution<double> half(0.0, std::sqrt(0.5) * noise_scale);
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double re = half(eng);
      const double im = half(eng);
      y(i, j) += std::complex<double>(re, im);
    }
  }
}

double correlate(const CMatrix& a, const CMatrix& y_prime) {
  return (a.array() * y_prime.array().conjugate()).real().sum();
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& ce, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < k; ++r) {
    if (std::find(ce.begin(), ce.end(), r) == ce.end()) out.push_back(r);
  }
  return out;
}

std::vector<Link> case3_links(const DetectorConfig& cfg, std::size_t k) {
  const auto readers = complement(cfg.ce_set, k);
  std::vector<Link> links;
  for (const auto t : cfg.ce_set) {
    for (const auto r : readers) links.push_back({t, r});
  }
  return links;
}

void check_case3(const Deployment& dep, const DetectorConfig& cfg,
                 const OrthogonalSequenceSet& seqs) {
  validate_ce_set(dep, cfg.ce_set);
  if (static_cast<std::size_t>(seqs.slots()) != cfg.ce_set.size() ||
      seqs.coefficients.rows() != seqs.coefficients.cols()) {
    throw InvalidArgument("Case 3 needs one length-T sequence per CE, T = |CE set|");
  }
  if (cfg.ce_set.size() >= dep.size()) throw InvalidArgument("Case 3 needs at least one reader");
}

template <typename TrialFn>
BerEstimate run_trials(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                       const TrialFn& trial) {
  if (trials < 1) throw InvalidArgument("trial count must be >= 1");
  const std::uint64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<std::uint64_t> errors(blocks, 0);
  parallel_for(blocks, workers, [&](std::size_t b) {
    auto eng = make_stream(seed, b + 1);
    std::bernoulli_distribution coin(0.5);
    const std::uint64_t first = b * kTrialsPerBlock;
    const std::uint64_t last = std::min(trials, first + kTrialsPerBlock);
    std::uint64_t err = 0;
    for (std::uint64_t i = first; i < last; ++i) {
      const int bit = coin(eng) ? 1 : 0;
      if (trial(bit, eng) != bit) ++err;
    }
    errors[b] = err;
  });
  BerEstimate est;
  est.trials = trials;
  for (const auto e : errors) est.errors += e;
  est.ber = static_cast<double>(est.errors) / static_cast<double>(trials);
  est.half_width = kZ95 * std::sqrt(est.ber * (1.0 - est.ber) / static_cast<double>(trials));
  return est;
}

}  // namespace

void DetectorConfig::validate(std::size_t num_aps) const {
  if (!std::isfinite(gamma0) || !std::isfinite(gamma1)) {
    throw InvalidArgument("reflection coefficients must be finite");
  }
  if (gamma1 < gamma0) throw InvalidArgument("gamma1 must not be below gamma0");
  if (!(prior0 > 0.0) || !(prior1 > 0.0) || std::abs(prior0 + prior1 - 1.0) > 1e-12) {
    throw InvalidArgument("priors must be positive and sum to 1");
  }
  if (ce_set.empty()) throw InvalidArgument("CE set must not be empty");
  for (std::size_t i = 0; i < ce_set.size(); ++i) {
    if (ce_set[i] >= num_aps) throw InvalidArgument("CE index out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (ce_set[i] == ce_set[j]) throw InvalidArgument("CE indices must be distinct");
    }
  }
  if (reader_policy == ReaderPolicy::Explicit) {
    if (readers.empty()) throw InvalidArgument("explicit reader list is empty");
    for (std::size_t i = 0; i < readers.size(); ++i) {
      if (readers[i] >= num_aps) throw InvalidArgument("reader index out of range");
      if (std::find(ce_set.begin(), ce_set.end(), readers[i]) != ce_set.end()) {
        throw InvalidArgument("AP " + std::to_string(readers[i]) +
                              " is both a CE and a reader in the same slot");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (readers[i] == readers[j]) throw InvalidArgument("reader indices must be distinct");
      }
    }
  }
  if (links(num_aps).empty()) throw InvalidArgument("configuration has no readers");
}

std::vector<Link> DetectorConfig::links(std::size_t num_aps) const {
  std::vector<Link> out;
  switch (reader_policy) {
    case ReaderPolicy::AllOthers:
      for (const auto t : ce_set) {
        for (std::size_t r = 0; r < num_aps; ++r) {
          if (r != t) out.push_back({t, r});
        }
      }
      break;
    case ReaderPolicy::Complement:
      for (const auto t : ce_set) {
        for (const auto r : complement(ce_set, num_aps)) out.push_back({t, r});
      }
      break;
    case ReaderPolicy::Explicit: {
      auto sorted = readers;
      std::sort(sorted.begin(), sorted.end());
      for (const auto t : ce_set) {
        for (const auto r : sorted) {
          if (r != t) out.push_back({t, r});
        }
      }
      break;
    }
  }
  return out;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

PeResult pe_from_link_energy(double gamma_gap, double link_energy) {
  if (gamma_gap < 0.0 || link_energy < 0.0) {
    throw InvalidArgument("gamma gap and link energy must be non-negative");
  }
  const double arg = gamma_gap * std::sqrt(0.5 * link_energy);
  return {q_function(arg), arg};
}

PeResult pe_from_metric(double gamma_gap, double transmit_energy, int antennas, double metric) {
  return pe_from_link_energy(gamma_gap, transmit_energy * antennas * metric);
}

PeResult closed_form_pe(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                        double transmit_energy) {
  cfg.validate(dep.size());
  if (!cfg.equal_priors()) throw InvalidArgument("closed-form Pe assumes equal priors");
  const auto links = cfg.links(dep.size());
  return pe_from_metric(cfg.gamma1 - cfg.gamma0, transmit_energy, dep.antennas(),
                        link_gain_sum(dep, bd, links));
}

PeResult closed_form_pe(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                        const ProbingSignal& phi) {
  if (phi.antennas() != dep.antennas()) {
    throw InvalidArgument("probing signal and deployment disagree on M");
  }
  return closed_form_pe(dep, bd, cfg, phi.energy());
}

PeResult closed_form_pe_case3(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                              const ProbingSignal& phi, const OrthogonalSequenceSet& seqs) {
  cfg.validate(dep.size());
  check_case3(dep, cfg, seqs);
  if (!cfg.equal_priors()) throw InvalidArgument("closed-form Pe assumes equal priors");
  if (phi.antennas() != dep.antennas()) {
    throw InvalidArgument("probing signal and deployment disagree on M");
  }
  const auto links = case3_links(cfg, dep.size());
  const double t_eta = seqs.slots() * seqs.power_coefficient;
  return pe_from_metric(cfg.gamma1 - cfg.gamma0, t_eta * phi.energy(), dep.antennas(),
                        link_gain_sum(dep, bd, links));
}

LinkModel::LinkModel(const ChannelRealization& real, const ProbingSignal& phi,
                     std::vector<Link> links)
    : links_(std::move(links)), rows_(phi.antennas()), cols_(phi.slot_length()) {
  if (phi.antennas() != real.deployment().antennas()) {
    throw InvalidArgument("probing signal and deployment disagree on M");
  }
  const CMatrix& p = phi.matrix();
  direct_.reserve(links_.size());
  backscatter_.reserve(links_.size());
  for (const auto& l : links_) {
    if (l.ce == l.reader) throw InvalidArgument("a link needs distinct CE and reader");
    direct_.push_back(real.inter_ap(l.ce, l.reader) * p);
    const CVector& gr = real.bd_channel(l.reader);
    const CVector& gt = real.bd_channel(l.ce);
    CMatrix a = gr * (gt.transpose() * p);
    energy_ += a.squaredNorm();
    backscatter_.push_back(std::move(a));
  }
}

ReceivedBlocks simulate_received(const LinkModel& model, const DetectorConfig& cfg, int bit,
                                 Engine& eng, double noise_scale) {
  check_bit(bit);
  const double gamma = gamma_for(cfg, bit);
  ReceivedBlocks out;
  out.links = model.links();
  out.blocks.reserve(out.links.size());
  for (std::size_t i = 0; i < out.links.size(); ++i) {
    CMatrix y = model.direct(i) + gamma * model.backscatter(i);
    add_noise(y, eng, noise_scale);
    out.blocks.push_back(std::move(y));
  }
  return out;
}

ReceivedBlocks simulate_received(const ChannelRealization& real, const ProbingSignal& phi,
                                 const DetectorConfig& cfg, int bit, std::uint64_t seed,
                                 double noise_scale) {
  cfg.validate(real.num_aps());
  const LinkModel model(real, phi, cfg.links(real.num_aps()));
  auto eng = make_stream(seed, 0);
  return simulate_received(model, cfg, bit, eng, noise_scale);
}

TestStatistic llr_detect(const ReceivedBlocks& y, const LinkModel& model,
                         const DetectorConfig& cfg, double noise_variance) {
  if (y.links != model.links() || y.blocks.size() != model.links().size()) {
    throw InvalidArgument("received blocks do not match the link set");
  }
  TestStatistic stat;
  for (std::size_t i = 0; i < y.blocks.size(); ++i) {
    const CMatrix& block = y.blocks[i];
    if (block.rows() != model.rows() || block.cols() != model.cols()) {
      throw InvalidArgument("received block shape does not match the probing signal");
    }
    stat.llr += correlate(model.backscatter(i), block - model.direct(i));
  }
  stat.threshold = map_threshold(cfg, model.energy(), noise_variance);
  stat.decision = stat.llr > stat.threshold ? 1 : 0;
  return stat;
}

TestStatistic llr_detect(const ReceivedBlocks& y, const ChannelRealization& real,
                         const ProbingSignal& phi, const DetectorConfig& cfg) {
  cfg.validate(real.num_aps());
  const LinkModel model(real, phi, cfg.links(real.num_aps()));
  return llr_detect(y, model, cfg);
}

SlotBlocks simulate_received_case3(const ChannelRealization& real, const ProbingSignal& phi,
                                   const DetectorConfig& cfg, const OrthogonalSequenceSet& seqs,
                                   int bit, std::uint64_t seed, double noise_scale) {
  check_bit(bit);
  cfg.validate(real.num_aps());
  check_case3(real.deployment(), cfg, seqs);
  const LinkModel model(real, phi, case3_links(cfg, real.num_aps()));
  const double gamma = gamma_for(cfg, bit);
  auto eng = make_stream(seed, 0);

  SlotBlocks out;
  out.readers = complement(cfg.ce_set, real.num_aps());
  const std::size_t nr = out.readers.size();
  const int slots = seqs.slots();
  out.blocks.assign(nr, {});
  for (std::size_t ri = 0; ri < nr; ++ri) {
    for (int l = 0; l < slots; ++l) {
      CMatrix y = CMatrix::Zero(model.rows(), model.cols());
      for (std::size_t ci = 0; ci < cfg.ce_set.size(); ++ci) {
        const std::size_t link = ci * nr + ri;
        y += seqs.coefficients(static_cast<Eigen::Index>(ci), l) *
             (model.direct(link) + gamma * model.backscatter(link));
      }
      add_noise(y, eng, noise_scale);
      out.blocks[ri].push_back(std::move(y));
    }
  }
  return out;
}

namespace {

TestStatistic detect_case3(const SlotBlocks& y, const LinkModel& model, const DetectorConfig& cfg,
                           const OrthogonalSequenceSet& seqs) {
  const std::size_t nr = y.readers.size();
  const std::size_t nce = cfg.ce_set.size();
  if (y.blocks.size() != nr || model.links().size() != nce * nr) {
    throw InvalidArgument("slot blocks do not match the Case 3 link set");
  }
  const int slots = seqs.slots();
  // Despreading gives Z = T eta (G Phi + gamma A) + noise of variance T eta;
  // rescaling by 1/(T eta) leaves the model blocks with noise 1/(T eta).
  const double t_eta = slots * seqs.power_coefficient;
  ReceivedBlocks despread;
  despread.links = model.links();
  despread.blocks.resize(model.links().size());
  for (std::size_t ci = 0; ci < nce; ++ci) {
    for (std::size_t ri = 0; ri < nr; ++ri) {
      if (static_cast<int>(y.blocks[ri].size()) != slots) {
        throw InvalidArgument("reader has the wrong number of slots");
      }
      CMatrix z = CMatrix::Zero(model.rows(), model.cols());
      for (int l = 0; l < slots; ++l) {
        z += std::conj(seqs.coefficients(static_cast<Eigen::Index>(ci), l)) * y.blocks[ri][l];
      }
      despread.blocks[ci * nr + ri] = z / t_eta;
    }
  }
  return llr_detect(despread, model, cfg, 1.0 / t_eta);
}

}  // namespace

TestStatistic detect_case3(const SlotBlocks& y, const ChannelRealization& real,
                           const ProbingSignal& phi, const DetectorConfig& cfg,
                           const OrthogonalSequenceSet& seqs) {
  cfg.validate(real.num_aps());
  check_case3(real.deployment(), cfg, seqs);
  const LinkModel model(real, phi, case3_links(cfg, real.num_aps()));
  return detect_case3(y, model, cfg, seqs);
}

BerEstimate monte_carlo_ber(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                            const ProbingSignal& phi, std::uint64_t trials, std::uint64_t seed,
                            unsigned workers) {
  cfg.validate(dep.size());
  const auto real = synthesize_channels(dep, bd, seed);
  const LinkModel model(real, phi, cfg.links(dep.size()));
  return run_trials(trials, seed, workers, [&](int bit, Engine& eng) {
    return llr_detect(simulate_received(model, cfg, bit, eng), model, cfg).decision;
  });
}

BerEstimate monte_carlo_ber_case3(const Deployment& dep, Point bd, const DetectorConfig& cfg,
                                  const ProbingSignal& phi, const OrthogonalSequenceSet& seqs,
                                  std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  cfg.validate(dep.size());
  check_case3(dep, cfg, seqs);
  const auto real = synthesize_channels(dep, bd, seed);
  return run_trials(trials, seed, workers, [&](int bit, Engine& eng) {
    const auto y = simulate_received_case3(real, phi, cfg, seqs, bit, eng());
    return detect_case3(y, real, phi, cfg, seqs).decision;
  });
}

}  // namespace bibc
