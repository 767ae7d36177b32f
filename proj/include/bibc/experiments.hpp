// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bibc/geometry.hpp"
#include "bibc/kvformat.hpp"
#include "bibc/random.hpp"
#include "bibc/selection.hpp"

namespace bibc {

/// Campaign description. Text form (all keys optional, defaults shown):
///
///   k_list        = [20, 30, 50]
///   kappa_list    = [2, 6]
///   coverage_side = 40
///   region_side   = 10
///   antennas      = 8
///   gamma0        = 0
///   gamma1        = 1
///   snr_db        = [..]            # or snr_db_min / snr_db_max / snr_db_step
///   snr_db_min    = 0
///   snr_db_max    = 90
///   snr_db_step   = 0.1
///   n_deployments = 2000
///   seed          = 1
///   target_pe     = 0.001
///   boundary_step = 0               # 0 selects perimeter / 400
struct CampaignConfig {
  std::vector<int> k_list{20, 30, 50};
  std::vector<int> kappa_list{2, 6};
  double coverage_side = 40.0;
  double region_side = 10.0;
  int antennas = 8;
  double gamma0 = 0.0;
  double gamma1 = 1.0;
  std::vector<double> snr_db = default_snr_grid();
  std::size_t n_deployments = 2000;
  std::uint64_t seed = 1;
  double target_pe = 1e-3;
  double boundary_step = 0.0;

  /// InvalidArgument for malformed values, GeometryError when the region
  /// cannot fit inside the coverage square or some K < 2.
  void validate() const;
  [[nodiscard]] double effective_boundary_step() const;

  static std::vector<double> snr_grid(double lo, double hi, double step);
  static std::vector<double> default_snr_grid() { return snr_grid(0.0, 90.0, 0.1); }
  static CampaignConfig from_document(const KeyValueDocument& doc);
  [[nodiscard]] KeyValueDocument to_document() const;
};

/// Uniform AP positions over the [0, side]^2 coverage square and a square
/// region whose center is uniform over the positions that keep it inside.
struct Scenario {
  Deployment deployment;
  Rectangle region;
};
Scenario sample_scenario(std::size_t num_aps, double coverage_side, double region_side,
                         int antennas, Engine& eng);

struct PeCurve {
  std::string label;
  std::vector<double> snr_db;
  std::vector<double> pe;
};

/// Worst-case closed-form Pe of a CE-reader pair at its worst point.
PeCurve pe_curve(const Deployment& dep, const PairSelection& pair,
                 const std::vector<double>& snr_db, double gamma0 = 0.0, double gamma1 = 1.0);
/// Same for a single CE with every other AP reading.
PeCurve pe_curve(const Deployment& dep, const CeSelection& ce, const std::vector<double>& snr_db,
                 double gamma0 = 0.0, double gamma1 = 1.0);

/// SNR where a non-increasing curve crosses `target`, interpolating
/// log10(Pe) linearly between grid points. Empty when the grid does not
/// bracket the target.
std::optional<double> snr_at_pe(const std::vector<double>& snr_db, const std::vector<double>& pe,
                                double target);

struct CampaignCurves {
  int num_aps = 0;
  std::vector<double> snr_db;
  std::vector<double> pe_benchmark;
  std::vector<std::vector<double>> pe_optimal;  // per kappa, averaged
  std::vector<double> gap_db;                   // per kappa; NaN if not bracketed
  std::vector<double> optimality_rate;          // per kappa, vs exhaustive pair search
  std::vector<double> mean_instance_gap_db;     // per kappa, mean of snr_gap_db
};

struct CampaignResult {
  CampaignConfig config;
  std::vector<CampaignCurves> per_k;
};

/// Deployments are drawn from stream (seed, K, index), scored in parallel
/// and reduced in index order, so the result is independent of `workers`.
CampaignResult run_campaign(const CampaignConfig& cfg, unsigned workers = 0);

/// curves_K<k>.csv: snr_db,pe_benchmark,pe_optimal_kappa<k>...
void write_campaign_curves_csv(const CampaignCurves& curves, const CampaignConfig& cfg,
                               std::ostream& out);
void write_campaign_summary(const CampaignResult& result, std::ostream& out);
/// Writes every curves_K<k>.csv plus summary.txt into `dir` (created).
void write_campaign(const CampaignResult& result, const std::string& dir);

/// Single-CE objective over an nx-by-ny cell grid, evaluated at cell centers.
struct HeatmapGrid {
  Rectangle region;
  int nx = 1;
  int ny = 1;
  std::size_t ce_index = 0;
  std::vector<double> values;  // row-major, x fastest
  std::vector<double> pe;      // same layout; empty unless an SNR was given
  std::size_t argmin = 0;

  [[nodiscard]] Point cell_center(std::size_t i) const;
  [[nodiscard]] double value(int ix, int iy) const { return values[iy * nx + ix]; }
};

HeatmapGrid emit_heatmap(const Deployment& dep, const Rectangle& region, std::size_t ce_index,
                         int nx, int ny, std::optional<double> snr_db = std::nullopt,
                         double gamma0 = 0.0, double gamma1 = 1.0);

/// x,y,objective[,pe],is_min
void write_heatmap_csv(const HeatmapGrid& grid, std::ostream& out);
/// snr_db,pe_<label>... ; all curves must share one grid.
void write_curves_csv(const std::vector<PeCurve>& curves, std::ostream& out);

}  // namespace bibc
