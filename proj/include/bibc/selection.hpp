// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bibc/geometry.hpp"

namespace bibc {

// ---------------------------------------------------------------------------
// Single CE, all other APs read (max over t of min over the region).
// ---------------------------------------------------------------------------

struct PgdSettings {
  double learning_rate = 2000.0;
  int max_iterations = 100;
  double convergence_tol = 1e-6;  // meters of movement per accepted step
  int starts_x = 4;
  int starts_y = 4;
  int max_backtracks = 20;  // step halvings before a start is declared converged

  void validate() const;
};

struct ObjectiveEval {
  double value = 0.0;
  Point gradient;
};

/// f(p) = 1/d_t(p)^2 * sum_{r != t} 1/d_r(p)^2 and its analytic gradient.
/// Throws GeometryError when p sits on an AP.
ObjectiveEval opc1_objective(const Deployment& dep, std::size_t t, Point p);

struct CeSelection {
  std::size_t ce_index = 0;
  Point worst_point;
  double worst_value = 0.0;  // m_t
};

struct PgdStep {
  std::size_t start = 0;
  int iteration = 0;  // 0 is the initial centroid
  Point point;
  double value = 0.0;
};
using PgdObserver = std::function<void(const PgdStep&)>;

/// Multi-start projected gradient descent for min over `region` of the
/// objective with CE t. Starts at the partition centroids; each step is
/// p <- clamp(p - lr * grad f) with the step halved (up to max_backtracks
/// times) while it would increase f. The observer sees every accepted
/// iterate.
CeSelection pgd_minimize(const Deployment& dep, std::size_t t, const Rectangle& region,
                         const PgdSettings& settings, const PgdObserver& observer = {});

struct GridMinimum {
  Point point;
  double value = 0.0;
  std::size_t evaluated = 0;
};

/// Per-axis lattice for a grid search: an axis split into one cell holds
/// only its midpoint; otherwise the n+1 cell corners, n = ceil(len/res).
/// Halving the resolution therefore always yields a superset.
std::vector<Point> region_lattice(const Rectangle& region, double resolution);

/// Exhaustive minimum of the single-CE objective over region_lattice.
/// Lattice nodes within `resolution` of an AP are skipped when any other
/// node is available.
GridMinimum grid_search_min(const Deployment& dep, std::size_t t, const Rectangle& region,
                            double resolution);

struct CeSelectionReport {
  CeSelection best;
  std::vector<CeSelection> candidates;  // one per AP, by index
};

/// argmax_t m_t with m_t from pgd_minimize; ties go to the lowest index.
CeSelectionReport select_ce(const Deployment& dep, const Rectangle& region,
                            const PgdSettings& settings, unsigned workers = 1);

/// Same selection with m_t from grid_search_min (the brute-force baseline).
CeSelectionReport select_ce_grid(const Deployment& dep, const Rectangle& region,
                                 double resolution, unsigned workers = 1);

// ---------------------------------------------------------------------------
// One CE and one reader (max over pairs of min over the region boundary).
// ---------------------------------------------------------------------------

/// perimeter / 400
double default_boundary_step(const Rectangle& region);

/// Inverse squared AP distances at every boundary grid point, shared by all
/// pair evaluations on one region.
class BoundaryGainTable {
 public:
  BoundaryGainTable(const Deployment& dep, const Rectangle& region, double boundary_step);

  [[nodiscard]] std::size_t num_aps() const { return num_aps_; }
  [[nodiscard]] const std::vector<Point>& points() const { return points_; }
  [[nodiscard]] double step() const { return step_; }

  /// m_{r,t}: min over boundary points of 1/(d_t^2 d_r^2). Points within one
  /// boundary step of t or r are skipped unless nothing else is left.
  [[nodiscard]] GridMinimum pair_minimum(std::size_t t, std::size_t r) const;

 private:
  std::size_t num_aps_;
  double step_;
  std::vector<Point> points_;
  std::vector<double> gains_;  // [ap * points + i]
  std::vector<unsigned char> near_;
};

struct PairCandidate {
  std::size_t ce = 0;
  std::size_t reader = 0;
  Point worst_point;
  double worst_value = 0.0;
};

struct PairSelection {
  std::size_t ce_index = 0;
  std::size_t reader_index = 0;
  Point worst_point;
  double worst_value = 0.0;              // m_{r,t}
  std::vector<std::size_t> candidate_set;  // S
  int kappa = 0;
  std::vector<PairCandidate> evaluated;  // every pair the algorithm scored
};

/// Boundary-grid minimum of the pair objective.
GridMinimum grid_search_pair_min(const Deployment& dep, std::size_t t, std::size_t r,
                                 const Rectangle& region, double boundary_step);

/// The pruned CE-reader search:
///  1. t = AP nearest the region centroid;
///  2. m_{r,t} on the boundary grid for every r != t, keep the kappa best;
///  3. S = {t} + those readers;
///  4. score every remaining pair inside S;
///  5. return the best pair.
/// Ties are broken by rank order, then index.
PairSelection select_pair(const Deployment& dep, const Rectangle& region, int kappa,
                          double boundary_step);
PairSelection select_pair(const BoundaryGainTable& table, const Deployment& dep,
                          const Rectangle& region, int kappa);

/// The two APs closest to the region centroid.
PairSelection benchmark_pair(const Deployment& dep, const Rectangle& region,
                             double boundary_step);
PairSelection benchmark_pair(const BoundaryGainTable& table, const Deployment& dep,
                             const Rectangle& region);

/// Every unordered pair; the max-min optimum on the boundary grid.
PairSelection exhaustive_pair(const Deployment& dep, const Rectangle& region,
                              double boundary_step);
PairSelection exhaustive_pair(const BoundaryGainTable& table);

/// 10 log10(a / b). At a fixed target Pe the transmit SNR a pair needs is
/// inversely proportional to its metric, so this is the horizontal distance
/// between two Pe-vs-SNR curves.
double snr_gap_db(double metric_a, double metric_b);

}  // namespace bibc
