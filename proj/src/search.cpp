#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crancache/error.hpp"
#include "crancache/solvers.hpp"

namespace crancache {

double candidate_count(std::span<const std::size_t> cache_sizes, std::size_t rows) {
  double total = 1.0;
  for (std::size_t m : cache_sizes) {
    if (m > rows) return 0.0;
    double c = 1.0;
    for (std::size_t i = 1; i <= m; ++i)
      c = c * static_cast<double>(rows - m + i) / static_cast<double>(i);
    total *= std::round(c);
  }
  return total;
}

namespace {

constexpr double kTieTolerance = 1e-12;

std::vector<std::vector<std::size_t>> combinations(std::size_t rows, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k > rows) return out;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == rows - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::size_t row_limit(const Scenario& scenario, const SearchOptions& options) {
  return options.full_rows ? scenario.library.size() : scenario.layout.total_cache();
}

void check_budget(const Scenario& scenario, const SearchOptions& options) {
  const auto& sizes = scenario.layout.cache_sizes();
  const double count = candidate_count(sizes, row_limit(scenario, options));
  if (count > options.budget) {
    const double full = candidate_count(sizes, scenario.library.size());
    std::ostringstream msg;
    msg.precision(4);
    msg << "exhaustive search refused: " << count << " candidates exceed the budget of "
        << options.budget << " (" << full << " over all " << scenario.library.size() << " rows)";
    throw BudgetExceeded(msg.str(), full, candidate_count(sizes, scenario.layout.total_cache()));
  }
}

}  // namespace

void for_each_placement(const Scenario& scenario, const SearchOptions& options,
                        const std::function<void(const PlacementMatrix&)>& visit) {
  scenario.validate();
  check_budget(scenario, options);
  const std::size_t rows = row_limit(scenario, options);
  const std::size_t n_rrh = scenario.layout.size();
  std::vector<std::vector<std::vector<std::size_t>>> choices(n_rrh);
  for (std::size_t n = 0; n < n_rrh; ++n) choices[n] = combinations(rows, scenario.layout.cache_size(n));

  std::vector<std::size_t> digit(n_rrh, 0);
  PlacementMatrix a(scenario.library.size(), n_rrh);
  auto write_column = [&](std::size_t n, bool value) {
    for (std::size_t l : choices[n][digit[n]]) a.set(l, n, value);
  };
  for (std::size_t n = 0; n < n_rrh; ++n) write_column(n, true);
  while (true) {
    visit(a);
    std::size_t n = n_rrh;
    while (n > 0) {
      --n;
      write_column(n, false);
      if (++digit[n] < choices[n].size()) {
        write_column(n, true);
        break;
      }
      digit[n] = 0;
      write_column(n, true);
      if (n == 0) return;
    }
    if (n_rrh == 0) return;
  }
}

SearchResult exhaustive_search(const Evaluator& evaluator, double eta, const SearchOptions& options) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  const auto& sc = evaluator.scenario();
  const auto& p = sc.library.popularity;
  SearchResult result;
  bool have = false;
  double best_value = 0.0, best_spread = 0.0;
  for_each_placement(sc, options, [&](const PlacementMatrix& a) {
    result.candidates += 1.0;
    double outage = 0.0, fronthaul = 0.0;
    for (std::size_t l = 0; l < a.files(); ++l) {
      const auto mask = a.row_mask(l);
      outage += p[l] * evaluator.service_outage(mask);
      if (mask == 0) fronthaul += p[l];
    }
    const double value = eta * outage + (1.0 - eta) * fronthaul;
    const double spread = outage + fronthaul;
    bool better = !have || value < best_value - kTieTolerance;
    if (!better && std::abs(value - best_value) <= kTieTolerance)
      better = spread < best_spread - kTieTolerance ||
               (std::abs(spread - best_spread) <= kTieTolerance && a < result.best);
    if (better) {
      have = true;
      best_value = value;
      best_spread = spread;
      result.best = a;
      result.point = make_point(outage, fronthaul, eta);
    }
  });
  return result;
}

SearchResult exhaustive_search(const Scenario& scenario, double eta, const SearchOptions& options) {
  Evaluator evaluator(scenario);
  return exhaustive_search(evaluator, eta, options);
}

std::vector<Candidate> enumerate_placements(const Evaluator& evaluator, const SearchOptions& options) {
  std::vector<Candidate> out;
  const auto& p = evaluator.scenario().library.popularity;
  for_each_placement(evaluator.scenario(), options, [&](const PlacementMatrix& a) {
    PlacementMetrics m;
    for (std::size_t l = 0; l < a.files(); ++l) {
      const auto mask = a.row_mask(l);
      m.cell_outage += p[l] * evaluator.service_outage(mask);
      if (mask == 0) m.fronthaul += p[l];
    }
    out.push_back({a, m});
  });
  return out;
}

ModeSelection mode_select(const Evaluator& evaluator, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  const auto& sc = evaluator.scenario();
  ModeSelection sel;
  if (const auto c = eta_crossover(evaluator)) {
    sel.eta0 = c->eta0;
    sel.chose_mpc = eta > c->eta0;
  }
  sel.placement = sel.chose_mpc ? mpc_placement(sc.layout, sc.library.size())
                                : lb_lcd_placement(sc.layout, sc.library.size());
  sel.point = evaluator.evaluate(sel.placement, eta);
  return sel;
}

const char* baseline_name(Baseline b) noexcept {
  return b == Baseline::Random ? "random" : "probabilistic";
}

Baseline parse_baseline(const std::string& name) {
  if (name == "random") return Baseline::Random;
  if (name == "probabilistic") return Baseline::Probabilistic;
  throw ValidationError("unknown baseline strategy '" + name + "'");
}

BaselineEstimate baseline_expected_objective(Baseline strategy, const Evaluator& evaluator,
                                             double eta, std::size_t draws, Rng& rng) {
  if (draws < 1) throw ValidationError("baseline draws must be at least 1");
  const auto& sc = evaluator.scenario();
  double sum_o = 0.0, sum_f = 0.0, sum_v = 0.0, sum_v2 = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    const auto a = strategy == Baseline::Random
                       ? random_placement(sc.layout, sc.library.size(), rng)
                       : probabilistic_placement(sc.library, sc.layout, rng);
    const auto pt = evaluator.evaluate(a, eta);
    sum_o += pt.cell_outage;
    sum_f += pt.fronthaul;
    sum_v += pt.value;
    sum_v2 += pt.value * pt.value;
  }
  const double n = static_cast<double>(draws);
  BaselineEstimate est;
  est.draws = draws;
  est.mean = make_point(sum_o / n, sum_f / n, eta);
  if (draws > 1) {
    const double var = std::max(0.0, (sum_v2 - sum_v * sum_v / n) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

}  // namespace crancache
