#include "crancache/objective.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>

#include "crancache/error.hpp"

namespace crancache {

ObjectivePoint make_point(double cell_outage, double fronthaul, double eta) {
  return {cell_outage, fronthaul, eta, eta * cell_outage + (1.0 - eta) * fronthaul};
}

double fronthaul_expectation(const PlacementMatrix& placement, const FileLibrary& library) {
  if (placement.files() != library.size())
    throw ValidationError("placement: row count does not match library.L");
  double f = 0.0;
  for (std::size_t l = 0; l < placement.files(); ++l)
    if (fronthaul_usage(placement, l)) f += library.popularity[l];
  return f;
}

Evaluator::Evaluator(Scenario scenario, double theta_offset, LocationDensity density)
    : scenario_((scenario.validate(), std::move(scenario))),
      integrator_(build_grid(scenario_.layout.radius(), scenario_.grid_u, scenario_.grid_v,
                             theta_offset),
                  scenario_.layout, scenario_.radio, std::move(density)),
      full_mask_(scenario_.layout.size() == 64 ? ~std::uint64_t{0}
                                               : (std::uint64_t{1} << scenario_.layout.size()) - 1) {}

double Evaluator::service_outage(std::uint64_t mask) const {
  if (mask == 0) mask = full_mask_;
  {
    std::shared_lock lock(service_mutex_);
    if (auto it = service_memo_.find(mask); it != service_memo_.end()) return it->second;
  }
  std::vector<std::size_t> members;
  for (std::size_t n = 0; n < scenario_.layout.size(); ++n)
    if (mask >> n & 1) members.push_back(n);
  const double value = integrator_.average_outage(members);
  std::unique_lock lock(service_mutex_);
  service_memo_.emplace(mask, value);
  return value;
}

std::vector<double> Evaluator::file_outages(const PlacementMatrix& placement) const {
  std::vector<double> out(placement.files());
  for (std::size_t l = 0; l < placement.files(); ++l) out[l] = service_outage(placement.row_mask(l));
  return out;
}

PlacementMetrics Evaluator::metrics(const PlacementMatrix& placement) const {
  {
    std::shared_lock lock(placement_mutex_);
    if (auto it = placement_memo_.find(placement); it != placement_memo_.end()) return it->second;
  }
  if (placement.files() != scenario_.library.size() || placement.rrhs() != scenario_.layout.size())
    throw ValidationError("placement: shape does not match the scenario (L x N)");
  const auto& p = scenario_.library.popularity;
  PlacementMetrics m;
  for (std::size_t l = 0; l < placement.files(); ++l) {
    const auto mask = placement.row_mask(l);
    m.cell_outage += p[l] * service_outage(mask);
    if (mask == 0) m.fronthaul += p[l];
  }
  std::unique_lock lock(placement_mutex_);
  placement_memo_.emplace(placement, m);
  return m;
}

ObjectivePoint Evaluator::evaluate(const PlacementMatrix& placement, double eta) const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  placement.check_feasible(scenario_.layout.cache_sizes());
  ++evaluations_;
  const auto m = metrics(placement);
  return make_point(m.cell_outage, m.fronthaul, eta);
}

std::size_t Evaluator::integrations() const {
  std::shared_lock lock(service_mutex_);
  return service_memo_.size();
}

std::optional<Crossover> eta_crossover(const Evaluator& evaluator) {
  const auto& sc = evaluator.scenario();
  const std::size_t files = sc.library.size();
  const auto mpc = mpc_placement(sc.layout, files);
  const auto lcd = lb_lcd_placement(sc.layout, files);
  if (sc.layout.size() < 2 || mpc == lcd) return std::nullopt;

  const auto& p = sc.library.popularity;
  const auto out_mpc = evaluator.file_outages(mpc);
  const auto out_lcd = evaluator.file_outages(lcd);

  // Equal objectives: eta (O_mpc - O_lcd) = (1 - eta) (T_lcd - T_mpc).
  double outage_gap = 0.0;    // sum P_l (O_mpc - O_lcd)
  double fronthaul_gap = 0.0; // sum P_l (T_lcd - T_mpc)
  for (std::size_t l = 0; l < files; ++l) {
    outage_gap += p[l] * (out_mpc[l] - out_lcd[l]);
    fronthaul_gap += p[l] * (fronthaul_usage(lcd, l) - fronthaul_usage(mpc, l));
  }
  if (fronthaul_gap == 0.0) return std::nullopt;

  Crossover c;
  c.eta0 = 1.0 / (1.0 + outage_gap / fronthaul_gap);
  c.mpc = evaluator.metrics(mpc);
  c.lb_lcd = evaluator.metrics(lcd);

  if (sc.layout.equal_cache_sizes()) {
    const std::size_t m = sc.layout.cache_size(0);
    const std::size_t nm = sc.layout.total_cache();
    double num = 0.0;
    for (std::size_t l = 0; l < nm; ++l) num += p[l] * (out_lcd[l] - out_mpc[l]);
    const double den = sc.library.mass(m, nm);
    if (den > 0.0) c.eta0_equal_cache = 1.0 / (1.0 + num / den);
  }
  return c;
}

std::vector<TradeoffPoint> pareto_filter(std::vector<TradeoffPoint> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  // sorted by outage then fronthaul: a point survives iff its fronthaul is
  // strictly below every earlier survivor's
  std::vector<TradeoffPoint> front;
  for (const auto& q : points)
    if (front.empty() || q.fronthaul < front.back().fronthaul) front.push_back(q);
  return front;
}

std::vector<TradeoffPoint> supported_points(std::vector<TradeoffPoint> points) {
  const auto front = pareto_filter(std::move(points));
  std::vector<TradeoffPoint> hull;
  for (const auto& q : front) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const double cross = (b.cell_outage - a.cell_outage) * (q.fronthaul - a.fronthaul) -
                           (b.fronthaul - a.fronthaul) * (q.cell_outage - a.cell_outage);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(q);
  }
  return hull;
}

}  // namespace crancache
