#include "crancache/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "crancache/error.hpp"
#include "crancache/kernels/kernels.hpp"

namespace crancache {

std::vector<double> simpson_weights(std::size_t intervals) {
  if (intervals < 2 || intervals % 2 != 0)
    throw ValidationError("Simpson subdivision count must be even and >= 2");
  std::vector<double> w(intervals + 1, 2.0);
  for (std::size_t i = 1; i < intervals; i += 2) w[i] = 4.0;
  w.front() = 1.0;
  w.back() = 1.0;
  return w;
}

SimpsonGrid build_grid(double radius, std::size_t u_intervals, std::size_t v_intervals,
                       double theta_offset) {
  if (!(radius > 0.0)) throw ValidationError("quadrature: radius must be positive");
  SimpsonGrid g;
  g.u_intervals = u_intervals;
  g.v_intervals = v_intervals;
  g.weight_u = simpson_weights(u_intervals);
  g.weight_v = simpson_weights(v_intervals);
  g.radius = radius;
  g.delta_h = radius / static_cast<double>(u_intervals);
  g.delta_k = 2.0 * std::numbers::pi / static_cast<double>(v_intervals);
  g.theta_offset = theta_offset;
  for (std::size_t u = 0; u <= u_intervals; ++u) g.rho.push_back(static_cast<double>(u) * g.delta_h);
  for (std::size_t v = 0; v <= v_intervals; ++v)
    g.theta.push_back(theta_offset + static_cast<double>(v) * g.delta_k);
  return g;
}

namespace {
double density_at(const LocationDensity& density, double radius, double rho, double theta) {
  if (density) return density(rho, theta);
  return 1.0 / (std::numbers::pi * radius * radius);
}
}  // namespace

double integrate(const SimpsonGrid& grid, const std::function<double(double, double)>& integrand,
                 const LocationDensity& density) {
  std::vector<double> w;
  std::vector<double> values;
  w.reserve(grid.node_count());
  values.reserve(grid.node_count());
  // u = 0 carries a zero Jacobian
  for (std::size_t u = 1; u < grid.rho.size(); ++u) {
    for (std::size_t v = 0; v < grid.theta.size(); ++v) {
      const double r = grid.rho[u];
      const double t = grid.theta[v];
      w.push_back(grid.weight(u, v) * r * density_at(density, grid.radius, r, t));
      values.push_back(integrand(r, t));
    }
  }
  return grid.delta_h * grid.delta_k / 9.0 * kernels::weighted_sum(w, values);
}

CellIntegrator::CellIntegrator(SimpsonGrid grid, const RrhLayout& layout, const RadioConfig& radio,
                               LocationDensity density)
    : grid_(std::move(grid)), layout_(layout), link_(radio, layout.size(), layout.radius()) {
  if (std::abs(grid_.radius - layout.radius()) > 1e-12 * layout.radius())
    throw ValidationError("quadrature: grid radius differs from the cell radius");
  const double scale = grid_.delta_h * grid_.delta_k / 9.0;
  const double near = kCollisionRadius * layout.radius();
  const double shift = kCollisionShift * layout.radius();
  for (std::size_t u = 1; u < grid_.rho.size(); ++u) {
    for (std::size_t v = 0; v < grid_.theta.size(); ++v) {
      double r = grid_.rho[u];
      const double t = grid_.theta[v];
      const double w = scale * grid_.weight(u, v) * r * density_at(density, grid_.radius, r, t);
      Point p = to_cartesian({r, t});
      const bool hit = std::any_of(layout.points().begin(), layout.points().end(),
                                   [&](Point q) { return distance(p, q) <= near; });
      if (hit) {
        r = r + shift <= layout.radius() ? r + shift : r - shift;
        p = to_cartesian({r, t});
        ++displaced_;
      }
      nodes_.push_back(p);
      weights_.push_back(w);
    }
  }
}

double CellIntegrator::average_outage(std::span<const std::size_t> members) const {
  std::vector<double> values(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    values[i] = outage_at(layout_, members, nodes_[i], link_);
  return std::clamp(kernels::weighted_sum(weights_, values), 0.0, 1.0);
}

double cell_average_outage(const PlacementMatrix& placement, std::size_t l,
                           const SimpsonGrid& grid, const RrhLayout& layout,
                           const RadioConfig& radio, const LocationDensity& density) {
  const CellIntegrator integrator(grid, layout, radio, density);
  const auto s = service_set(placement, l);
  return integrator.average_outage(s.members);
}

}  // namespace crancache
