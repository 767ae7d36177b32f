// SPDX-License-Identifier: Apache-2.0
#include "bibc/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>

#include "bibc/detector.hpp"
#include "bibc/error.hpp"
#include "bibc/metrics.hpp"

namespace bibc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> to_ints(const std::vector<double>& v, const std::string& key) {
  std::vector<int> out;
  for (const double x : v) {
    if (std::trunc(x) != x || std::abs(x) > 1e9) {
      throw InvalidArgument("key '" + key + "' must hold integers");
    }
    out.push_back(static_cast<int>(x));
  }
  return out;
}

std::vector<double> to_doubles(const std::vector<int>& v) { return {v.begin(), v.end()}; }

DetectorConfig pair_config(const PairSelection& pair, double gamma0, double gamma1) {
  DetectorConfig cfg;
  cfg.gamma0 = gamma0;
  cfg.gamma1 = gamma1;
  cfg.ce_set = {pair.ce_index};
  cfg.reader_policy = ReaderPolicy::Explicit;
  cfg.readers = {pair.reader_index};
  return cfg;
}

// Worst values for one deployment: benchmark, per-kappa selections, and the
// exhaustive optimum.
struct InstanceScores {
  double benchmark = 0.0;
  std::vector<double> selected;
  double exhaustive = 0.0;
};

}  // namespace

std::vector<double> CampaignConfig::snr_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw InvalidArgument("SNR grid needs lo < hi and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = lo + step * static_cast<double>(i);
  return grid;
}

void CampaignConfig::validate() const {
  if (k_list.empty()) throw InvalidArgument("k_list must not be empty");
  if (kappa_list.empty()) throw InvalidArgument("kappa_list must not be empty");
  if (!(coverage_side > 0.0) || !(region_side > 0.0)) {
    throw InvalidArgument("coverage_side and region_side must be positive");
  }
  if (region_side > coverage_side) {
    throw GeometryError("the region does not fit inside the coverage area");
  }
  for (const int k : k_list) {
    if (k < 2) throw GeometryError("every deployment needs K >= 2");
  }
  for (const int kappa : kappa_list) {
    if (kappa < 1) throw InvalidArgument("kappa must be >= 1");
  }
  if (antennas < 1) throw InvalidArgument("antennas must be >= 1");
  if (!(gamma1 > gamma0)) throw InvalidArgument("gamma1 must exceed gamma0");
  if (snr_db.size() < 2) throw InvalidArgument("SNR grid needs at least two points");
  for (std::size_t i = 1; i < snr_db.size(); ++i) {
    if (!(snr_db[i] > snr_db[i - 1])) throw InvalidArgument("SNR grid must be strictly increasing");
  }
  if (n_deployments < 1) throw InvalidArgument("n_deployments must be >= 1");
  if (!(target_pe > 0.0 && target_pe < 0.5)) throw InvalidArgument("target_pe must be in (0, 0.5)");
  if (boundary_step < 0.0 || boundary_step > region_side) {
    throw InvalidArgument("boundary_step must be in [0, region_side]");
  }
}

double CampaignConfig::effective_boundary_step() const {
  return boundary_step > 0.0 ? boundary_step : 4.0 * region_side / 400.0;
}

CampaignConfig CampaignConfig::from_document(const KeyValueDocument& doc) {
  CampaignConfig c;
  if (doc.has("k_list")) c.k_list = to_ints(doc.numbers("k_list"), "k_list");
  if (doc.has("kappa_list")) c.kappa_list = to_ints(doc.numbers("kappa_list"), "kappa_list");
  c.coverage_side = doc.number_or("coverage_side", c.coverage_side);
  c.region_side = doc.number_or("region_side", c.region_side);
  c.antennas = static_cast<int>(doc.integer_or("antennas", c.antennas));
  c.gamma0 = doc.number_or("gamma0", c.gamma0);
  c.gamma1 = doc.number_or("gamma1", c.gamma1);
  if (doc.has("snr_db")) {
    c.snr_db = doc.numbers("snr_db");
  } else if (doc.has("snr_db_min") || doc.has("snr_db_max") || doc.has("snr_db_step")) {
    c.snr_db = snr_grid(doc.number_or("snr_db_min", 0.0), doc.number_or("snr_db_max", 90.0),
                        doc.number_or("snr_db_step", 0.1));
  }
  const long long n = doc.integer_or("n_deployments", static_cast<long long>(c.n_deployments));
  if (n < 1) throw InvalidArgument("n_deployments must be >= 1");
  c.n_deployments = static_cast<std::size_t>(n);
  const long long seed = doc.integer_or("seed", static_cast<long long>(c.seed));
  if (seed < 0) throw InvalidArgument("seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.target_pe = doc.number_or("target_pe", c.target_pe);
  c.boundary_step = doc.number_or("boundary_step", c.boundary_step);
  c.validate();
  return c;
}

KeyValueDocument CampaignConfig::to_document() const {
  KeyValueDocument doc;
  doc.set_numbers("k_list", to_doubles(k_list));
  doc.set_numbers("kappa_list", to_doubles(kappa_list));
  doc.set_number("coverage_side", coverage_side);
  doc.set_number("region_side", region_side);
  doc.set_number("antennas", antennas);
  doc.set_number("gamma0", gamma0);
  doc.set_number("gamma1", gamma1);
  doc.set_numbers("snr_db", snr_db);
  doc.set_number("n_deployments", static_cast<double>(n_deployments));
  doc.set_number("seed", static_cast<double>(seed));
  doc.set_number("target_pe", target_pe);
  doc.set_number("boundary_step", boundary_step);
  return doc;
}

Scenario sample_scenario(std::size_t num_aps, double coverage_side, double region_side,
                         int antennas, Engine& eng) {
  if (region_side > coverage_side) {
    throw GeometryError("the region does not fit inside the coverage area");
  }
  std::uniform_real_distribution<double> pos(0.0, coverage_side);
  std::vector<Point> aps(num_aps);
  for (auto& p : aps) {
    p.x = pos(eng);
    p.y = pos(eng);
  }
  std::uniform_real_distribution<double> ctr(0.5 * region_side, coverage_side - 0.5 * region_side);
  const Point c{ctr(eng), ctr(eng)};
  const Rectangle coverage({0.5 * coverage_side, 0.5 * coverage_side}, coverage_side,
                           coverage_side);
  return {Deployment(std::move(aps), antennas, coverage), Rectangle(c, region_side, region_side)};
}

PeCurve pe_curve(const Deployment& dep, const PairSelection& pair,
                 const std::vector<double>& snr_db, double gamma0, double gamma1) {
  const auto cfg = pair_config(pair, gamma0, gamma1);
  PeCurve curve{"ce" + std::to_string(pair.ce_index) + "_reader" +
                    std::to_string(pair.reader_index),
                snr_db, {}};
  curve.pe.reserve(snr_db.size());
  for (const double s : snr_db) {
    curve.pe.push_back(closed_form_pe(dep, pair.worst_point, cfg, std::pow(10.0, s / 10.0)).pe);
  }
  return curve;
}

PeCurve pe_curve(const Deployment& dep, const CeSelection& ce, const std::vector<double>& snr_db,
                 double gamma0, double gamma1) {
  DetectorConfig cfg;
  cfg.gamma0 = gamma0;
  cfg.gamma1 = gamma1;
  cfg.ce_set = {ce.ce_index};
  PeCurve curve{"ce" + std::to_string(ce.ce_index), snr_db, {}};
  curve.pe.reserve(snr_db.size());
  for (const double s : snr_db) {
    curve.pe.push_back(closed_form_pe(dep, ce.worst_point, cfg, std::pow(10.0, s / 10.0)).pe);
  }
  return curve;
}

std::optional<double> snr_at_pe(const std::vector<double>& snr_db, const std::vector<double>& pe,
                                double target) {
  if (snr_db.size() != pe.size()) throw InvalidArgument("curve axes differ in length");
  const double lt = std::log10(target);
  for (std::size_t i = 1; i < pe.size(); ++i) {
    if (pe[i] <= target && pe[i - 1] > target) {
      const double a = std::log10(pe[i - 1]);
      const double b = std::log10(pe[i]);
      if (!std::isfinite(b)) return snr_db[i];
      const double frac = (a - lt) / (a - b);
      return snr_db[i - 1] + frac * (snr_db[i] - snr_db[i - 1]);
    }
  }
  return std::nullopt;
}

CampaignResult run_campaign(const CampaignConfig& cfg, unsigned workers) {
  cfg.validate();
  const double step = cfg.effective_boundary_step();
  const double gap = cfg.gamma1 - cfg.gamma0;
  const std::size_t nsnr = cfg.snr_db.size();
  std::vector<double> energy(nsnr);
  for (std::size_t j = 0; j < nsnr; ++j) energy[j] = std::pow(10.0, cfg.snr_db[j] / 10.0);

  CampaignResult result{cfg, {}};
  for (const int k : cfg.k_list) {
    const auto nk = static_cast<std::size_t>(k);
    const std::uint64_t k_seed = derive_seed(cfg.seed, nk);
    std::vector<InstanceScores> scores(cfg.n_deployments);
    parallel_for(cfg.n_deployments, workers, [&](std::size_t i) {
      auto eng = make_stream(k_seed, i);
      const auto sc = sample_scenario(nk, cfg.coverage_side, cfg.region_side, cfg.antennas, eng);
      const BoundaryGainTable table(sc.deployment, sc.region, step);
      InstanceScores s;
      s.benchmark = benchmark_pair(table, sc.deployment, sc.region).worst_value;
      for (const int kappa : cfg.kappa_list) {
        const int kk = std::min(kappa, k - 1);
        s.selected.push_back(select_pair(table, sc.deployment, sc.region, kk).worst_value);
      }
      s.exhaustive = exhaustive_pair(table).worst_value;
      scores[i] = std::move(s);
    });

    CampaignCurves c;
    c.num_aps = k;
    c.snr_db = cfg.snr_db;
    c.pe_benchmark.assign(nsnr, 0.0);
    c.pe_optimal.assign(cfg.kappa_list.size(), std::vector<double>(nsnr, 0.0));
    std::vector<std::size_t> optimal_hits(cfg.kappa_list.size(), 0);
    std::vector<double> instance_gap(cfg.kappa_list.size(), 0.0);
    for (const auto& s : scores) {
      for (std::size_t j = 0; j < nsnr; ++j) {
        c.pe_benchmark[j] += pe_from_metric(gap, energy[j], cfg.antennas, s.benchmark).pe;
      }
      for (std::size_t q = 0; q < cfg.kappa_list.size(); ++q) {
        for (std::size_t j = 0; j < nsnr; ++j) {
          c.pe_optimal[q][j] += pe_from_metric(gap, energy[j], cfg.antennas, s.selected[q]).pe;
        }
        if (s.selected[q] == s.exhaustive) ++optimal_hits[q];
        instance_gap[q] += snr_gap_db(s.selected[q], s.benchmark);
      }
    }
    const auto n = static_cast<double>(cfg.n_deployments);
    for (auto& v : c.pe_benchmark) v /= n;
    for (auto& curve : c.pe_optimal) {
      for (auto& v : curve) v /= n;
    }
    const auto bench_at = snr_at_pe(c.snr_db, c.pe_benchmark, cfg.target_pe);
    for (std::size_t q = 0; q < cfg.kappa_list.size(); ++q) {
      const auto opt_at = snr_at_pe(c.snr_db, c.pe_optimal[q], cfg.target_pe);
      c.gap_db.push_back(bench_at && opt_at ? *bench_at - *opt_at : kNaN);
      c.optimality_rate.push_back(static_cast<double>(optimal_hits[q]) / n);
      c.mean_instance_gap_db.push_back(instance_gap[q] / n);
    }
    result.per_k.push_back(std::move(c));
  }
  return result;
}

void write_campaign_curves_csv(const CampaignCurves& curves, const CampaignConfig& cfg,
                               std::ostream& out) {
  out << "snr_db,pe_benchmark";
  for (const int kappa : cfg.kappa_list) out << ",pe_optimal_kappa" << kappa;
  out << "\n";
  for (std::size_t j = 0; j < curves.snr_db.size(); ++j) {
    out << format_number(curves.snr_db[j]) << ',' << format_number(curves.pe_benchmark[j]);
    for (const auto& opt : curves.pe_optimal) out << ',' << format_number(opt[j]);
    out << "\n";
  }
}

void write_campaign_summary(const CampaignResult& result, std::ostream& out) {
  const auto& cfg = result.config;
  out << "# campaign summary\n";
  out << cfg.to_document().to_string();
  out << "\n# per K and kappa: average-curve gap at target_pe, mean per-instance gap,"
         " rate at which the pruned search hits the exhaustive optimum\n";
  for (const auto& c : result.per_k) {
    for (std::size_t q = 0; q < cfg.kappa_list.size(); ++q) {
      const std::string key =
          "K" + std::to_string(c.num_aps) + "_kappa" + std::to_string(cfg.kappa_list[q]);
      out << key << "_gap_db = "
          << (std::isnan(c.gap_db[q]) ? std::string("nan") : format_number(c.gap_db[q])) << "\n";
      out << key << "_mean_instance_gap_db = " << format_number(c.mean_instance_gap_db[q])
          << "\n";
      out << key << "_optimality_rate = " << format_number(c.optimality_rate[q]) << "\n";
    }
  }
}

void write_campaign(const CampaignResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& c : result.per_k) {
    const auto path = std::filesystem::path(dir) / ("curves_K" + std::to_string(c.num_aps) + ".csv");
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
    write_campaign_curves_csv(c, result.config, out);
  }
  std::ofstream summary(std::filesystem::path(dir) / "summary.txt");
  if (!summary) throw InvalidArgument("cannot write summary in '" + dir + "'");
  write_campaign_summary(result, summary);
}

Point HeatmapGrid::cell_center(std::size_t i) const {
  const auto ix = static_cast<int>(i % static_cast<std::size_t>(nx));
  const auto iy = static_cast<int>(i / static_cast<std::size_t>(nx));
  return {region.min_x() + (ix + 0.5) * region.width() / nx,
          region.min_y() + (iy + 0.5) * region.height() / ny};
}

HeatmapGrid emit_heatmap(const Deployment& dep, const Rectangle& region, std::size_t ce_index,
                         int nx, int ny, std::optional<double> snr_db, double gamma0,
                         double gamma1) {
  if (ce_index >= dep.size()) throw InvalidArgument("CE index out of range");
  if (nx < 1 || ny < 1) throw InvalidArgument("heatmap needs at least one cell per axis");
  HeatmapGrid grid{region, nx, ny, ce_index, {}, {}, 0};
  const std::size_t n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  grid.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.values[i] = opc1_objective(dep, ce_index, grid.cell_center(i)).value;
    if (grid.values[i] < grid.values[grid.argmin]) grid.argmin = i;
  }
  if (snr_db) {
    const double energy = std::pow(10.0, *snr_db / 10.0);
    grid.pe.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      grid.pe[i] = pe_from_metric(gamma1 - gamma0, energy, dep.antennas(), grid.values[i]).pe;
    }
  }
  return grid;
}

void write_heatmap_csv(const HeatmapGrid& grid, std::ostream& out) {
  out << "x,y,objective" << (grid.pe.empty() ? "" : ",pe") << ",is_min\n";
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const Point c = grid.cell_center(i);
    out << format_number(c.x) << ',' << format_number(c.y) << ',' << format_number(grid.values[i]);
    if (!grid.pe.empty()) out << ',' << format_number(grid.pe[i]);
    out << ',' << (i == grid.argmin ? 1 : 0) << "\n";
  }
}

void write_curves_csv(const std::vector<PeCurve>& curves, std::ostream& out) {
  if (curves.empty()) return;
  out << "snr_db";
  for (const auto& c : curves) {
    if (c.snr_db != curves.front().snr_db) throw InvalidArgument("curves use different grids");
    out << ",pe_" << c.label;
  }
  out << "\n";
  for (std::size_t j = 0; j < curves.front().snr_db.size(); ++j) {
    out << format_number(curves.front().snr_db[j]);
    for (const auto& c : curves) out << ',' << format_number(c.pe[j]);
    out << "\n";
  }
}

}  // namespace bibc
