// SPDX-License-Identifier: Apache-2.0
//
// bibc: AP selection and detection experiments for bistatic backscatter in
// cell-free MIMO.
//
// Exit codes: 0 success, 2 invalid arguments or config, 3 infeasible geometry.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bibc/channel.hpp"
#include "bibc/detector.hpp"
#include "bibc/error.hpp"
#include "bibc/experiments.hpp"
#include "bibc/kvformat.hpp"
#include "bibc/selection.hpp"

namespace {

using namespace bibc;

constexpr int kExitInvalid = 2;
constexpr int kExitGeometry = 3;

// Where the deployment and region come from: files, an explicit AP list, or
// a seeded random draw.
struct ScenarioOptions {
  std::string deployment_file;
  std::string region_file;
  std::string aps;  // "x,y;x,y;..."
  std::vector<double> region_center;
  double region_side = 0.0;
  int num_aps = 20;
  int antennas = 8;
  double coverage_side = 30.0;
  double random_region_side = 5.0;
  std::uint64_t seed = 1;
  std::string save_deployment;

  void add_to(CLI::App& app, bool needs_region = true) {
    app.add_option("--deployment", deployment_file, "Deployment key-value file");
    app.add_option("--aps", aps, "Explicit AP list 'x,y;x,y;...'");
    app.add_option("--k", num_aps, "Number of APs for a random deployment")->check(CLI::Range(2, 100000));
    app.add_option("--antennas", antennas, "Antennas per AP (random or --aps)")->check(CLI::PositiveNumber);
    app.add_option("--coverage", coverage_side, "Coverage square side in meters (random)");
    app.add_option("--seed", seed, "Seed for random deployments");
    app.add_option("--save-deployment", save_deployment, "Write the deployment used to this file");
    if (needs_region) {
      app.add_option("--region", region_file, "Region key-value file");
      app.add_option("--region-center", region_center, "Region center x y")->expected(2);
      app.add_option("--region-side", region_side, "Square region side in meters");
      app.add_option("--random-region-side", random_region_side,
                     "Side of the randomly placed region when none is given");
    }
  }

  [[nodiscard]] Scenario resolve() const {
    std::optional<Deployment> dep;
    std::optional<Rectangle> region;
    if (!deployment_file.empty()) {
      dep = deployment_from_document(KeyValueDocument::load(deployment_file));
    } else if (!aps.empty()) {
      dep = Deployment(parse_aps(aps), antennas,
                       Rectangle({0.5 * coverage_side, 0.5 * coverage_side}, coverage_side,
                                 coverage_side));
    }
    if (!region_file.empty()) {
      region = region_from_document(KeyValueDocument::load(region_file));
    } else if (region_center.size() == 2) {
      if (!(region_side > 0.0)) throw InvalidArgument("--region-side must be positive");
      region = Rectangle({region_center[0], region_center[1]}, region_side, region_side);
    }
    if (!dep || !region) {
      auto eng = make_stream(seed, 0);
      auto sc = sample_scenario(static_cast<std::size_t>(num_aps), coverage_side,
                                random_region_side, antennas, eng);
      if (!dep) dep = sc.deployment;
      if (!region) region = sc.region;
    }
    if (!save_deployment.empty()) {
      std::ofstream out(save_deployment);
      if (!out) throw InvalidArgument("cannot write '" + save_deployment + "'");
      out << deployment_to_document(*dep).to_string() << region_to_document(*region).to_string();
    }
    return {*dep, *region};
  }

  static std::vector<Point> parse_aps(const std::string& text) {
    std::vector<Point> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto comma = item.find(',');
      if (comma == std::string::npos) throw InvalidArgument("--aps entries must be 'x,y'");
      try {
        out.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
      } catch (const std::logic_error&) {
        throw InvalidArgument("--aps entry '" + item + "' is not numeric");
      }
    }
    return out;
  }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw InvalidArgument("cannot write '" + path + "'");
  return file;
}

std::string point_list(Point p) { return "[" + format_number(p.x) + ", " + format_number(p.y) + "]"; }

void print_region(std::ostream& out, const Rectangle& region) {
  out << "region_center = " << point_list(region.center()) << "\n";
  out << "region_size = [" << format_number(region.width()) << ", "
      << format_number(region.height()) << "]\n";
}

int run_detect_sim(const ScenarioOptions& sc, const std::vector<double>& bd,
                   DetectorConfig cfg, const std::vector<long long>& ce,
                   const std::string& readers, const std::vector<long long>& reader_list, int tau,
                   const std::vector<double>& snr_db, std::uint64_t trials, std::uint64_t seed,
                   unsigned workers, const std::string& out_path) {
  const auto scenario = sc.resolve();
  const Deployment& dep = scenario.deployment;
  const Point p{bd.at(0), bd.at(1)};
  if (ce.empty()) {
    cfg.ce_set = {nearest_ap(dep, p)};
  } else {
    cfg.ce_set.clear();
    for (const auto c : ce) {
      if (c < 0) throw InvalidArgument("CE indices must be non-negative");
      cfg.ce_set.push_back(static_cast<std::size_t>(c));
    }
  }
  if (readers == "all-others") {
    cfg.reader_policy = ReaderPolicy::AllOthers;
  } else if (readers == "complement") {
    cfg.reader_policy = ReaderPolicy::Complement;
  } else {
    cfg.reader_policy = ReaderPolicy::Explicit;
    for (const auto r : reader_list) {
      if (r < 0) throw InvalidArgument("reader indices must be non-negative");
      cfg.readers.push_back(static_cast<std::size_t>(r));
    }
  }
  cfg.validate(dep.size());
  for (const auto& a : dep.aps()) {
    if (a == p) throw GeometryError("backscatter device is co-located with an AP");
  }

  std::ofstream file;
  std::ostream& out = open_output(out_path, file);
  out << "snr_db,mc_ber,ci_halfwidth,closed_form_pe\n";
  for (const double s : snr_db) {
    const auto phi = probing_signal_for_snr(dep.antennas(), tau, s);
    const auto est = monte_carlo_ber(dep, p, cfg, phi, trials, seed, workers);
    const auto pe = closed_form_pe(dep, p, cfg, phi);
    out << format_number(s) << ',' << format_number(est.ber) << ','
        << format_number(est.half_width) << ',' << format_number(pe.pe) << "\n";
  }
  return 0;
}

int run_select_ce(const ScenarioOptions& sc, const PgdSettings& settings, unsigned workers,
                  const std::string& out_path) {
  const auto scenario = sc.resolve();
  const auto report = select_ce(scenario.deployment, scenario.region, settings, workers);
  const auto nearest = nearest_ap(scenario.deployment, scenario.region.center());
  std::ofstream file;
  std::ostream& out = open_output(out_path, file);
  out << "# select-ce: max over CE of the min over the region, all other APs read\n";
  print_region(out, scenario.region);
  out << "ce_index = " << report.best.ce_index << "\n";
  out << "worst_point = " << point_list(report.best.worst_point) << "\n";
  out << "worst_value = " << format_number(report.best.worst_value) << "\n";
  out << "centroid_nearest_ap = " << nearest << "\n";
  out << "# candidate_<ap> = [worst_x, worst_y, m_t]\n";
  for (const auto& c : report.candidates) {
    out << "candidate_" << c.ce_index << " = [" << format_number(c.worst_point.x) << ", "
        << format_number(c.worst_point.y) << ", " << format_number(c.worst_value) << "]\n";
  }
  return 0;
}

void print_pair(std::ostream& out, const std::string& prefix, const PairSelection& sel) {
  out << prefix << "ce_index = " << sel.ce_index << "\n";
  out << prefix << "reader_index = " << sel.reader_index << "\n";
  out << prefix << "worst_point = " << point_list(sel.worst_point) << "\n";
  out << prefix << "worst_value = " << format_number(sel.worst_value) << "\n";
}

int run_select_pair(const ScenarioOptions& sc, int kappa, double step,
                    const std::string& out_path) {
  const auto scenario = sc.resolve();
  const auto& dep = scenario.deployment;
  if (step <= 0.0) step = default_boundary_step(scenario.region);
  const BoundaryGainTable table(dep, scenario.region, step);
  const auto sel = select_pair(table, dep, scenario.region, kappa);
  const auto bench = benchmark_pair(table, dep, scenario.region);

  std::ofstream file;
  std::ostream& out = open_output(out_path, file);
  out << "# select-pair: pruned max-min CE/reader search on the region boundary\n";
  print_region(out, scenario.region);
  out << "kappa = " << kappa << "\n";
  out << "boundary_step = " << format_number(step) << "\n";
  print_pair(out, "", sel);
  out << "candidate_set = [";
  for (std::size_t i = 0; i < sel.candidate_set.size(); ++i) {
    out << (i ? ", " : "") << sel.candidate_set[i];
  }
  out << "]\n";
  print_pair(out, "benchmark_", bench);
  out << "gap_vs_benchmark_db = " << format_number(snr_gap_db(sel.worst_value, bench.worst_value))
      << "\n";
  out << "# pair_<ce>_<reader> = [worst_x, worst_y, m_rt]\n";
  for (const auto& c : sel.evaluated) {
    out << "pair_" << c.ce << "_" << c.reader << " = [" << format_number(c.worst_point.x) << ", "
        << format_number(c.worst_point.y) << ", " << format_number(c.worst_value) << "]\n";
  }
  return 0;
}

int run_campaign_cmd(const std::string& config_path, const std::string& out_dir,
                     unsigned workers) {
  const auto cfg = config_path.empty()
                       ? CampaignConfig{}
                       : CampaignConfig::from_document(KeyValueDocument::load(config_path));
  const auto result = run_campaign(cfg, workers);
  write_campaign(result, out_dir);
  write_campaign_summary(result, std::cout);
  return 0;
}

int run_heatmap(const ScenarioOptions& sc, std::optional<long long> ce, int nx, int ny,
                std::optional<double> snr_db, const std::string& out_path) {
  const auto scenario = sc.resolve();
  std::size_t ce_index = 0;
  if (ce) {
    if (*ce < 0) throw InvalidArgument("--ce must be non-negative");
    ce_index = static_cast<std::size_t>(*ce);
  } else {
    ce_index = select_ce(scenario.deployment, scenario.region, PgdSettings{}).best.ce_index;
  }
  const auto grid = emit_heatmap(scenario.deployment, scenario.region, ce_index, nx, ny, snr_db);
  std::ofstream file;
  std::ostream& out = open_output(out_path, file);
  write_heatmap_csv(grid, out);
  return 0;
}

int run_pe_curve(const ScenarioOptions& sc, int kappa, double step, double lo, double hi,
                 double dstep, const std::string& out_path) {
  const auto scenario = sc.resolve();
  const auto& dep = scenario.deployment;
  if (step <= 0.0) step = default_boundary_step(scenario.region);
  const BoundaryGainTable table(dep, scenario.region, step);
  const auto grid = CampaignConfig::snr_grid(lo, hi, dstep);
  auto opt = pe_curve(dep, select_pair(table, dep, scenario.region, kappa), grid);
  auto bench = pe_curve(dep, benchmark_pair(table, dep, scenario.region), grid);
  opt.label = "optimal";
  bench.label = "benchmark";
  std::ofstream file;
  std::ostream& out = open_output(out_path, file);
  write_curves_csv({opt, bench}, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bistatic backscatter AP selection toolkit"};
  app.require_subcommand(1);

  // detect-sim
  auto* detect = app.add_subcommand("detect-sim", "Monte-Carlo BER vs closed-form Pe");
  ScenarioOptions detect_sc;
  detect_sc.add_to(*detect, false);
  std::vector<double> bd;
  DetectorConfig dcfg;
  std::vector<long long> ce_list, reader_list;
  std::string readers = "all-others";
  int tau = 8;
  std::vector<double> snr_db{0.0};
  std::uint64_t trials = 100000;
  std::uint64_t mc_seed = 1;
  unsigned workers = 0;
  std::string out_path;
  detect->add_option("--bd", bd, "Backscatter device position x y")->expected(2)->required();
  detect->add_option("--gamma0", dcfg.gamma0, "Reflection coefficient for bit 0");
  detect->add_option("--gamma1", dcfg.gamma1, "Reflection coefficient for bit 1");
  detect->add_option("--ce", ce_list, "CE indices (default: AP nearest the device)");
  detect->add_option("--readers", readers, "all-others | complement | list")
      ->check(CLI::IsMember({"all-others", "complement", "list"}));
  detect->add_option("--reader-list", reader_list, "Reader indices for --readers list");
  detect->add_option("--tau", tau, "Slot length tau_d in symbols");
  detect->add_option("--snr-db", snr_db, "Transmit SNR p_t tau_d in dB (list)");
  detect->add_option("--trials", trials, "Monte-Carlo trials per SNR point");
  detect->add_option("--mc-seed", mc_seed, "Seed for channels and noise");
  detect->add_option("--workers", workers, "Worker threads (0 = all cores)");
  detect->add_option("--out", out_path, "Output CSV (default stdout)");

  // select-ce
  auto* sce = app.add_subcommand("select-ce", "Optimal single CE, all other APs read");
  ScenarioOptions sce_sc;
  sce_sc.add_to(*sce);
  PgdSettings pgd;
  std::vector<int> starts{4, 4};
  sce->add_option("--lr", pgd.learning_rate, "PGD learning rate");
  sce->add_option("--iterations", pgd.max_iterations, "PGD iteration cap");
  sce->add_option("--tol", pgd.convergence_tol, "PGD step-norm tolerance (m)");
  sce->add_option("--starts", starts, "PGD start grid nx ny")->expected(2);
  sce->add_option("--workers", workers, "Worker threads (0 = all cores)");
  sce->add_option("--out", out_path, "Report file (default stdout)");

  // select-pair
  auto* spair = app.add_subcommand("select-pair", "Optimal CE-reader pair");
  ScenarioOptions spair_sc;
  spair_sc.add_to(*spair);
  int kappa = 2;
  double boundary_step = 0.0;
  spair->add_option("--kappa", kappa, "Readers kept after the first ranking");
  spair->add_option("--boundary-step", boundary_step, "Boundary grid step (0 = perimeter/400)");
  spair->add_option("--out", out_path, "Report file (default stdout)");

  // campaign
  auto* camp = app.add_subcommand("campaign", "Averaged optimal-vs-benchmark Pe campaign");
  std::string config_path;
  std::string out_dir = "campaign_out";
  camp->add_option("--config", config_path, "Campaign key-value config (default settings if omitted)");
  camp->add_option("--out-dir", out_dir, "Output directory");
  camp->add_option("--workers", workers, "Worker threads (0 = all cores)");

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "Single-CE objective over the region");
  ScenarioOptions heat_sc;
  heat_sc.add_to(*heat);
  std::optional<long long> heat_ce;
  std::vector<int> cells{50, 50};
  std::optional<double> heat_snr;
  heat->add_option("--ce", heat_ce, "CE index (default: selected CE)");
  heat->add_option("--cells", cells, "Cells per axis nx ny")->expected(2);
  heat->add_option("--snr-db", heat_snr, "Also emit Pe at this transmit SNR");
  heat->add_option("--out", out_path, "Output CSV (default stdout)");

  // pe-curve
  auto* curve = app.add_subcommand("pe-curve", "Worst-case Pe vs SNR, optimal pair and benchmark");
  ScenarioOptions curve_sc;
  curve_sc.add_to(*curve);
  double snr_lo = 0.0, snr_hi = 90.0, snr_step = 0.25;
  curve->add_option("--kappa", kappa, "Readers kept after the first ranking");
  curve->add_option("--boundary-step", boundary_step, "Boundary grid step (0 = perimeter/400)");
  curve->add_option("--snr-min", snr_lo, "Lowest SNR in dB");
  curve->add_option("--snr-max", snr_hi, "Highest SNR in dB");
  curve->add_option("--snr-step", snr_step, "SNR grid step in dB");
  curve->add_option("--out", out_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*detect) {
      return run_detect_sim(detect_sc, bd, dcfg, ce_list, readers, reader_list, tau, snr_db,
                            trials, mc_seed, workers, out_path);
    }
    if (*sce) {
      pgd.starts_x = starts.at(0);
      pgd.starts_y = starts.at(1);
      return run_select_ce(sce_sc, pgd, workers, out_path);
    }
    if (*spair) return run_select_pair(spair_sc, kappa, boundary_step, out_path);
    if (*camp) return run_campaign_cmd(config_path, out_dir, workers);
    if (*heat) return run_heatmap(heat_sc, heat_ce, cells.at(0), cells.at(1), heat_snr, out_path);
    if (*curve) {
      return run_pe_curve(curve_sc, kappa, boundary_step, snr_lo, snr_hi, snr_step, out_path);
    }
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGeometry;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
