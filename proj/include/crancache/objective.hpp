#pragma once

/// @file objective.hpp
/// Weighted-sum objective f = eta * (cell-average outage) + (1 - eta) * (fronthaul
/// usage), its memoizing evaluator, the MPC/LB-LCD crossover weight and
/// Pareto filtering of (outage, fronthaul) pairs.

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "crancache/model.hpp"
#include "crancache/quadrature.hpp"

namespace crancache {

struct ObjectivePoint {
  double cell_outage = 0.0;
  double fronthaul = 0.0;
  double eta = 0.0;
  double value = 0.0;
};

ObjectivePoint make_point(double cell_outage, double fronthaul, double eta);

/// sum_l P_l T_l
double fronthaul_expectation(const PlacementMatrix& placement, const FileLibrary& library);

struct PlacementMetrics {
  double cell_outage = 0.0;
  double fronthaul = 0.0;
};

struct PlacementHash {
  std::size_t operator()(const PlacementMatrix& a) const noexcept {
    return static_cast<std::size_t>(a.hash());
  }
};

/// Evaluates placements for one scenario. Cell averages are memoized per
/// service set and metrics per placement, so eta sweeps and GA generations
/// reuse earlier work. Safe to share between threads.
class Evaluator {
 public:
  explicit Evaluator(Scenario scenario, double theta_offset = 0.0, LocationDensity density = {});

  const Scenario& scenario() const noexcept { return scenario_; }
  const CellIntegrator& integrator() const noexcept { return integrator_; }

  /// Cell-average outage when the RRHs in `mask` serve the user.
  double service_outage(std::uint64_t mask) const;
  /// Per-file cell-average outage E[P_out^(l)].
  std::vector<double> file_outages(const PlacementMatrix& placement) const;
  PlacementMetrics metrics(const PlacementMatrix& placement) const;

  /// Rejects placements that break the cache-size or binary constraints.
  ObjectivePoint evaluate(const PlacementMatrix& placement, double eta) const;

  /// Number of evaluate() calls so far.
  std::size_t evaluations() const noexcept { return evaluations_.load(); }
  /// Number of distinct service sets integrated so far.
  std::size_t integrations() const;

 private:
  Scenario scenario_;
  CellIntegrator integrator_;
  std::uint64_t full_mask_;

  mutable std::shared_mutex service_mutex_;
  mutable std::unordered_map<std::uint64_t, double> service_memo_;
  mutable std::shared_mutex placement_mutex_;
  mutable std::unordered_map<PlacementMatrix, PlacementMetrics, PlacementHash> placement_memo_;
  mutable std::atomic<std::size_t> evaluations_{0};
};

struct Crossover {
  double eta0 = 0.0;                       ///< general form, any cache sizes
  std::optional<double> eta0_equal_cache;  ///< equal-M form, when all M_n agree
  PlacementMetrics mpc;
  PlacementMetrics lb_lcd;
};

/// Weight at which MPC and LB-LCD reach the same objective. Empty when the
/// two placements coincide (e.g. a single RRH), so no crossover exists.
std::optional<Crossover> eta_crossover(const Evaluator& evaluator);

struct TradeoffPoint {
  double cell_outage = 0.0;
  double fronthaul = 0.0;
  auto operator<=>(const TradeoffPoint&) const = default;
};

/// Points not weakly dominated by any other, deduplicated, sorted by outage.
std::vector<TradeoffPoint> pareto_filter(std::vector<TradeoffPoint> points);

/// Nondominated points on the lower-left convex hull, i.e. those that minimize
/// eta * outage + (1 - eta) * fronthaul for some eta in [0, 1].
std::vector<TradeoffPoint> supported_points(std::vector<TradeoffPoint> points);

}  // namespace crancache
