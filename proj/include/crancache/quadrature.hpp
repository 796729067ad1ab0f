#pragma once

/// @file quadrature.hpp
/// Cell averages over a disk by composite Simpson integration in polar
/// coordinates:
///
///   E[g] ~= (dh dk / 9) sum_u sum_v w_u w_v rho_u g(rho_u, theta_v) f(rho_u, theta_v)
///
/// with rho_u = u R / U, theta_v = theta_offset + v 2 pi / V and 1-D Simpson
/// patterns (1, 4, 2, ..., 4, 1) on both axes.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "crancache/analytics.hpp"
#include "crancache/model.hpp"

namespace crancache {

/// Composite Simpson pattern 1, 4, 2, 4, ..., 4, 1 for `intervals` (even) panels.
std::vector<double> simpson_weights(std::size_t intervals);

struct SimpsonGrid {
  std::size_t u_intervals = 0;
  std::size_t v_intervals = 0;
  double radius = 0.0;
  double delta_h = 0.0;
  double delta_k = 0.0;
  double theta_offset = 0.0;
  std::vector<double> rho;       ///< U + 1 radial nodes
  std::vector<double> theta;     ///< V + 1 angular nodes
  std::vector<double> weight_u;
  std::vector<double> weight_v;

  double weight(std::size_t u, std::size_t v) const { return weight_u[u] * weight_v[v]; }
  std::size_t node_count() const noexcept { return rho.size() * theta.size(); }
};

/// Rejects odd or zero subdivision counts.
SimpsonGrid build_grid(double radius, std::size_t u_intervals, std::size_t v_intervals,
                       double theta_offset = 0.0);

/// User-location density f(rho, theta). An empty function means uniform 1 / (pi R^2).
using LocationDensity = std::function<double(double rho, double theta)>;

/// Applies the rule to an arbitrary integrand.
double integrate(const SimpsonGrid& grid, const std::function<double(double, double)>& integrand,
                 const LocationDensity& density = {});

/// Grid nodes closer than this fraction of R to an RRH are moved radially.
inline constexpr double kCollisionRadius = 1e-9;
inline constexpr double kCollisionShift = 1e-6;

/// Precomputed node positions and combined weights for one grid over one
/// layout. Evaluates cell-average outage for any service set.
class CellIntegrator {
 public:
  CellIntegrator(SimpsonGrid grid, const RrhLayout& layout, const RadioConfig& radio,
                 LocationDensity density = {});

  const SimpsonGrid& grid() const noexcept { return grid_; }
  const LinkBudget& link() const noexcept { return link_; }
  /// Number of nodes that were shifted off an RRH position.
  std::size_t displaced_nodes() const noexcept { return displaced_; }

  /// Cell-average outage of the service set `members`, clamped to [0, 1].
  double average_outage(std::span<const std::size_t> members) const;

 private:
  SimpsonGrid grid_;
  RrhLayout layout_;
  LinkBudget link_;
  std::vector<Point> nodes_;     // nodes with rho > 0
  std::vector<double> weights_;  // dh dk / 9 * w * rho * f
  std::size_t displaced_ = 0;
};

/// Cell-average outage of file l under `placement`.
double cell_average_outage(const PlacementMatrix& placement, std::size_t l,
                           const SimpsonGrid& grid, const RrhLayout& layout,
                           const RadioConfig& radio, const LocationDensity& density = {});

}  // namespace crancache
