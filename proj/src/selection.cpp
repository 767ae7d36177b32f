// SPDX-License-Identifier: Apache-2.0
#include "bibc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bibc/error.hpp"
#include "bibc/random.hpp"

namespace bibc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective and gradient without the degenerate-geometry throw; returns +inf
// on an AP so that line search simply rejects such a point.
ObjectiveEval evaluate(const Deployment& dep, std::size_t t, Point p) {
  ObjectiveEval out;
  double ce_gain = 0.0;
  Point ce_grad;
  double readers = 0.0;
  Point readers_grad;
  for (std::size_t k = 0; k < dep.size(); ++k) {
    const Point a = dep.ap(k);
    const double d2 = squared_distance(a, p);
    if (d2 == 0.0) {
      out.value = kInf;
      return out;
    }
    const double g = 1.0 / d2;
    // grad (1/d^2) = -2 (p - a) / d^4
    const Point dg{-2.0 * (p.x - a.x) * g * g, -2.0 * (p.y - a.y) * g * g};
    if (k == t) {
      ce_gain = g;
      ce_grad = dg;
    } else {
      readers += g;
      readers_grad.x += dg.x;
      readers_grad.y += dg.y;
    }
  }
  out.value = ce_gain * readers;
  out.gradient = {ce_grad.x * readers + ce_gain * readers_grad.x,
                  ce_grad.y * readers + ce_gain * readers_grad.y};
  return out;
}

void check_index(const Deployment& dep, std::size_t t) {
  if (t >= dep.size()) throw InvalidArgument("AP index out of range");
}

std::vector<double> axis_nodes(double lo, double hi, double resolution) {
  const double len = hi - lo;
  const int n = std::max(1, static_cast<int>(std::ceil(len / resolution - 1e-9)));
  if (n == 1) return {0.5 * (lo + hi)};
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) v[i] = i == n ? hi : lo + len * i / n;
  return v;
}

template <typename Eval>
CeSelectionReport select_by(const Deployment& dep, unsigned workers, const Eval& eval) {
  CeSelectionReport report;
  report.candidates.resize(dep.size());
  parallel_for(dep.size(), workers, [&](std::size_t t) { report.candidates[t] = eval(t); });
  report.best = report.candidates[0];
  for (const auto& c : report.candidates) {
    if (c.worst_value > report.best.worst_value) report.best = c;
  }
  return report;
}

PairSelection make_selection(const PairCandidate& best, std::vector<std::size_t> set, int kappa,
                             std::vector<PairCandidate> evaluated) {
  PairSelection sel;
  sel.ce_index = best.ce;
  sel.reader_index = best.reader;
  sel.worst_point = best.worst_point;
  sel.worst_value = best.worst_value;
  sel.candidate_set = std::move(set);
  sel.kappa = kappa;
  sel.evaluated = std::move(evaluated);
  return sel;
}

PairCandidate score(const BoundaryGainTable& table, std::size_t t, std::size_t r) {
  const auto m = table.pair_minimum(t, r);
  return {t, r, m.point, m.value};
}

const PairCandidate& best_of(const std::vector<PairCandidate>& pairs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].worst_value > pairs[best].worst_value) best = i;
  }
  return pairs[best];
}

}  // namespace

void PgdSettings::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("PGD learning rate must be positive");
  if (max_iterations < 1) throw InvalidArgument("PGD needs at least one iteration");
  if (!(convergence_tol >= 0.0)) throw InvalidArgument("PGD tolerance must be >= 0");
  if (starts_x < 1 || starts_y < 1) throw InvalidArgument("PGD start grid must be >= 1x1");
  if (max_backtracks < 0) throw InvalidArgument("PGD backtrack count must be >= 0");
}

ObjectiveEval opc1_objective(const Deployment& dep, std::size_t t, Point p) {
  check_index(dep, t);
  auto e = evaluate(dep, t, p);
  if (std::isinf(e.value)) throw GeometryError("evaluation point coincides with an AP");
  return e;
}

CeSelection pgd_minimize(const Deployment& dep, std::size_t t, const Rectangle& region,
                         const PgdSettings& settings, const PgdObserver& observer) {
  check_index(dep, t);
  settings.validate();
  const auto starts = partition_centroids(region, settings.starts_x, settings.starts_y);

  CeSelection best{t, starts[0], kInf};
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Point p = starts[s];
    ObjectiveEval cur = evaluate(dep, t, p);
    if (observer) observer({s, 0, p, cur.value});
    for (int it = 1; it <= settings.max_iterations && std::isfinite(cur.value); ++it) {
      double lr = settings.learning_rate;
      bool accepted = false;
      Point next;
      ObjectiveEval cand;
      for (int b = 0; b <= settings.max_backtracks; ++b, lr *= 0.5) {
        next = region.clamp({p.x - lr * cur.gradient.x, p.y - lr * cur.gradient.y});
        cand = evaluate(dep, t, next);
        if (cand.value <= cur.value) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const double moved = distance(p, next);
      p = next;
      cur = cand;
      if (observer) observer({s, it, p, cur.value});
      if (moved < settings.convergence_tol) break;
    }
    if (cur.value < best.worst_value) best = {t, p, cur.value};
  }
  return best;
}

std::vector<Point> region_lattice(const Rectangle& region, double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("grid resolution must be positive");
  const auto xs = axis_nodes(region.min_x(), region.max_x(), resolution);
  const auto ys = axis_nodes(region.min_y(), region.max_y(), resolution);
  std::vector<Point> pts;
  pts.reserve(xs.size() * ys.size());
  for (const double y : ys) {
    for (const double x : xs) pts.push_back({x, y});
  }
  return pts;
}

GridMinimum grid_search_min(const Deployment& dep, std::size_t t, const Rectangle& region,
                            double resolution) {
  check_index(dep, t);
  const auto pts = region_lattice(region, resolution);
  const double eps2 = resolution * resolution;
  const auto near_ap = [&](Point p) {
    return std::any_of(dep.aps().begin(), dep.aps().end(),
                       [&](Point a) { return squared_distance(a, p) < eps2; });
  };

  GridMinimum out{pts[0], kInf, 0};
  for (const bool allow_near : {false, true}) {
    for (const auto& p : pts) {
      if (!allow_near && near_ap(p)) continue;
      const double v = evaluate(dep, t, p).value;
      ++out.evaluated;
      if (v < out.value) {
        out.value = v;
        out.point = p;
      }
    }
    if (std::isfinite(out.value)) break;
  }
  return out;
}

CeSelectionReport select_ce(const Deployment& dep, const Rectangle& region,
                            const PgdSettings& settings, unsigned workers) {
  settings.validate();
  return select_by(dep, workers,
                   [&](std::size_t t) { return pgd_minimize(dep, t, region, settings); });
}

CeSelectionReport select_ce_grid(const Deployment& dep, const Rectangle& region,
                                 double resolution, unsigned workers) {
  return select_by(dep, workers, [&](std::size_t t) {
    const auto g = grid_search_min(dep, t, region, resolution);
    return CeSelection{t, g.point, g.value};
  });
}

double default_boundary_step(const Rectangle& region) { return region.perimeter() / 400.0; }

BoundaryGainTable::BoundaryGainTable(const Deployment& dep, const Rectangle& region,
                                     double boundary_step)
    : num_aps_(dep.size()), step_(boundary_step), points_(boundary_points(region, boundary_step)) {
  const std::size_t np = points_.size();
  gains_.resize(num_aps_ * np);
  near_.resize(num_aps_ * np);
  const double eps2 = boundary_step * boundary_step;
  for (std::size_t k = 0; k < num_aps_; ++k) {
    for (std::size_t i = 0; i < np; ++i) {
      const double d2 = squared_distance(dep.ap(k), points_[i]);
      gains_[k * np + i] = d2 > 0.0 ? 1.0 / d2 : kInf;
      near_[k * np + i] = d2 < eps2 ? 1 : 0;
    }
  }
}

GridMinimum BoundaryGainTable::pair_minimum(std::size_t t, std::size_t r) const {
  if (t == r || t >= num_aps_ || r >= num_aps_) {
    throw InvalidArgument("pair needs two distinct valid AP indices");
  }
  const std::size_t np = points_.size();
  const double* gt = &gains_[t * np];
  const double* gr = &gains_[r * np];
  GridMinimum out{points_[0], kInf, 0};
  for (const bool allow_near : {false, true}) {
    for (std::size_t i = 0; i < np; ++i) {
      if (!allow_near && (near_[t * np + i] || near_[r * np + i])) continue;
      const double v = gt[i] * gr[i];
      ++out.evaluated;
      if (v < out.value) {
        out.value = v;
        out.point = points_[i];
      }
    }
    if (std::isfinite(out.value)) break;
  }
  return out;
}

GridMinimum grid_search_pair_min(const Deployment& dep, std::size_t t, std::size_t r,
                                 const Rectangle& region, double boundary_step) {
  return BoundaryGainTable(dep, region, boundary_step).pair_minimum(t, r);
}

PairSelection select_pair(const BoundaryGainTable& table, const Deployment& dep,
                          const Rectangle& region, int kappa) {
  const std::size_t k = dep.size();
  if (kappa < 1 || static_cast<std::size_t>(kappa) > k - 1) {
    throw InvalidArgument("kappa must lie in [1, K-1]");
  }
  const std::size_t ce = nearest_ap(dep, region.center());

  std::vector<PairCandidate> first;
  first.reserve(k - 1);
  for (std::size_t r = 0; r < k; ++r) {
    if (r != ce) first.push_back(score(table, ce, r));
  }
  std::stable_sort(first.begin(), first.end(), [](const PairCandidate& a, const PairCandidate& b) {
    return a.worst_value > b.worst_value;
  });

  std::vector<std::size_t> set{ce};
  std::vector<PairCandidate> evaluated;
  for (int i = 0; i < kappa; ++i) {
    set.push_back(first[i].reader);
    evaluated.push_back(first[i]);
  }
  for (std::size_t i = 1; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      evaluated.push_back(score(table, set[i], set[j]));
    }
  }
  return make_selection(best_of(evaluated), std::move(set), kappa, evaluated);
}

PairSelection select_pair(const Deployment& dep, const Rectangle& region, int kappa,
                          double boundary_step) {
  return select_pair(BoundaryGainTable(dep, region, boundary_step), dep, region, kappa);
}

PairSelection benchmark_pair(const BoundaryGainTable& table, const Deployment& dep,
                             const Rectangle& region) {
  const auto order = aps_by_distance(dep.aps(), region.center());
  std::vector<PairCandidate> evaluated{score(table, order[0], order[1])};
  return make_selection(evaluated.front(), {order[0], order[1]}, 0, evaluated);
}

PairSelection benchmark_pair(const Deployment& dep, const Rectangle& region,
                             double boundary_step) {
  return benchmark_pair(BoundaryGainTable(dep, region, boundary_step), dep, region);
}

PairSelection exhaustive_pair(const BoundaryGainTable& table) {
  const std::size_t k = table.num_aps();
  std::vector<PairCandidate> evaluated;
  evaluated.reserve(k * (k - 1) / 2);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) evaluated.push_back(score(table, a, b));
  }
  std::vector<std::size_t> all(k);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return make_selection(best_of(evaluated), std::move(all), static_cast<int>(k - 1), evaluated);
}

PairSelection exhaustive_pair(const Deployment& dep, const Rectangle& region,
                              double boundary_step) {
  return exhaustive_pair(BoundaryGainTable(dep, region, boundary_step));
}

double snr_gap_db(double metric_a, double metric_b) {
  if (!(metric_a > 0.0) || !(metric_b > 0.0)) {
    throw InvalidArgument("SNR gap needs positive metrics");
  }
  return 10.0 * std::log10(metric_a / metric_b);
}

}  // namespace bibc
