#include <algorithm>
#include <cmath>
#include <numeric>

#include "crancache/error.hpp"
#include "crancache/parallel.hpp"
#include "crancache/solvers.hpp"

namespace crancache {

void GaConfig::validate() const {
  if (population_size < 2) throw ValidationError("ga.population_size must be at least 2");
  if (elite_count >= population_size)
    throw ValidationError("ga.elite_count must be below ga.population_size");
  if (!(crossover_fraction >= 0.0 && crossover_fraction <= 1.0))
    throw ValidationError("ga.crossover_fraction must lie in [0, 1]");
  if (max_generations < 1) throw ValidationError("ga.max_generations must be at least 1");
  if (stall_generations < 1) throw ValidationError("ga.stall_generations must be at least 1");
  if (!(stall_tolerance >= 0.0)) throw ValidationError("ga.stall_tolerance must be nonnegative");
}

std::size_t GaConfig::crossover_count() const {
  return static_cast<std::size_t>(
      std::lround(crossover_fraction * static_cast<double>(population_size - elite_count)));
}

std::size_t GaConfig::mutation_count() const {
  return population_size - elite_count - crossover_count();
}

namespace {

std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

PlacementMatrix random_support_placement(const RrhLayout& layout, std::size_t files, Rng& rng) {
  const std::size_t bound = layout.total_cache();
  PlacementMatrix a(files, layout.size());
  std::vector<std::size_t> rows(bound);
  for (std::size_t n = 0; n < layout.size(); ++n) {
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const std::size_t m = layout.cache_size(n);
    for (std::size_t i = 0; i < m; ++i) {
      std::swap(rows[i], rows[i + uniform_index(bound - i, rng)]);
      a.set(rows[i], n, true);
    }
  }
  return a;
}

struct ColumnShape {
  std::vector<std::size_t> sizes;
  std::size_t bound = 0;  // L'
};

ColumnShape shape_of(const PlacementMatrix& a) {
  ColumnShape s;
  for (std::size_t n = 0; n < a.rrhs(); ++n) {
    s.sizes.push_back(a.column_sum(n));
    s.bound += s.sizes.back();
  }
  s.bound = std::min(s.bound, a.files());
  return s;
}

}  // namespace

GaPopulation ga_initial_population(const GaConfig& config, const Scenario& scenario, Rng& rng) {
  config.validate();
  scenario.validate();
  const auto& layout = scenario.layout;
  const std::size_t files = scenario.library.size();
  GaPopulation pop;
  pop.individuals.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i)
    pop.individuals.push_back(random_support_placement(layout, files, rng));
  if (config.seed_with_canonical) {
    const std::size_t last = config.population_size - 1;
    pop.individuals[last - 1] = mpc_placement(layout, files);
    pop.individuals[last] = lb_lcd_placement(layout, files);
  }
  return pop;
}

void repair_column(std::span<std::uint8_t> column, std::size_t target) {
  std::size_t sum = std::count(column.begin(), column.end(), std::uint8_t{1});
  for (std::size_t l = column.size(); l-- > 0 && sum > target;)
    if (column[l]) {
      column[l] = 0;
      --sum;
    }
  for (std::size_t l = 0; l < column.size() && sum < target; ++l)
    if (!column[l]) {
      column[l] = 1;
      ++sum;
    }
}

PlacementMatrix crossover(const PlacementMatrix& parent1, const PlacementMatrix& parent2, Rng& rng) {
  if (parent1.files() != parent2.files() || parent1.rrhs() != parent2.rrhs())
    throw ValidationError("crossover: parents differ in shape");
  const auto shape = shape_of(parent1);
  PlacementMatrix child(parent1.files(), parent1.rrhs());
  for (std::size_t n = 0; n < parent1.rrhs(); ++n) {
    auto out = child.column(n);
    const auto c1 = parent1.column(n);
    const auto c2 = parent2.column(n);
    if (shape.bound < 2) {
      std::copy(c1.begin(), c1.end(), out.begin());
    } else {
      const std::size_t l1 = uniform_index(shape.bound, rng);
      std::size_t l2 = uniform_index(shape.bound - 1, rng);
      if (l2 >= l1) ++l2;
      // l1 < l2: parent 1 takes parent 2's segment; otherwise the reverse
      const auto& base = l1 < l2 ? c1 : c2;
      const auto& donor = l1 < l2 ? c2 : c1;
      const std::size_t lo = std::min(l1, l2), hi = std::max(l1, l2);
      std::copy(base.begin(), base.end(), out.begin());
      std::copy(donor.begin() + lo, donor.begin() + hi + 1, out.begin() + lo);
    }
    repair_column(out, shape.sizes[n]);
  }
  return child;
}

PlacementMatrix mutate(const PlacementMatrix& individual, Rng& rng) {
  const auto shape = shape_of(individual);
  PlacementMatrix child = individual;
  if (shape.bound == 0) return child;
  for (std::size_t n = 0; n < child.rrhs(); ++n) {
    auto col = child.column(n);
    const std::size_t l = uniform_index(shape.bound, rng);
    col[l] ^= 1;
    repair_column(col, shape.sizes[n]);
  }
  return child;
}

std::vector<double> sus_expectations(std::span<const double> fitness, std::size_t count) {
  const std::size_t n = fitness.size();
  if (n == 0) throw ValidationError("sus_select: empty population");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && fitness[order[j + 1]] == fitness[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) weight[order[k]] = static_cast<double>(n) - rank;
    i = j + 1;
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  for (auto& w : weight) w *= static_cast<double>(count) / total;
  return weight;
}

std::vector<std::size_t> sus_select(std::span<const double> fitness, std::size_t count, Rng& rng) {
  if (count == 0) throw ValidationError("sus_select: count must be at least 1");
  const auto expect = sus_expectations(fitness, count);
  const double start = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<std::size_t> picks;
  picks.reserve(count);
  double cumulative = 0.0;
  std::size_t i = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double pointer = start + static_cast<double>(k);
    while (i + 1 < expect.size() && cumulative + expect[i] <= pointer) cumulative += expect[i++];
    picks.push_back(i);
  }
  return picks;
}

GaResult ga_optimize(const Evaluator& evaluator, double eta, const GaConfig& config) {
  config.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  Rng rng(config.seed);
  auto pop = ga_initial_population(config, evaluator.scenario(), rng);

  const std::size_t np = config.population_size;
  const std::size_t ne = config.elite_count;
  const std::size_t nc = config.crossover_count();
  const std::size_t nm = config.mutation_count();

  GaResult result;
  std::size_t stall = 0;
  double best_spread = 0.0;
  for (std::size_t gen = 1;; ++gen) {
    pop.generation = gen;
    pop.fitness.assign(np, 0.0);
    std::vector<double> spread(np, 0.0);
    parallel_for(np, [&](std::size_t i) {
      const auto pt = evaluator.evaluate(pop.individuals[i], eta);
      pop.fitness[i] = pt.value;
      spread[i] = pt.cell_outage + pt.fronthaul;
    });
    result.evaluations += np;

    std::vector<std::size_t> order(np);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (pop.fitness[a] != pop.fitness[b]) return pop.fitness[a] < pop.fitness[b];
      if (spread[a] != spread[b]) return spread[a] < spread[b];
      return pop.individuals[a] < pop.individuals[b];
    });

    const double best = pop.fitness[order.front()];
    if (gen == 1 || pop.best_fitness - best >= config.stall_tolerance) {
      stall = 0;
      result.converged_generation = gen;
    } else {
      ++stall;
    }
    if (gen == 1 || best < pop.best_fitness ||
        (best == pop.best_fitness && (spread[order.front()] < best_spread ||
                                      (spread[order.front()] == best_spread &&
                                       pop.individuals[order.front()] < pop.best)))) {
      pop.best = pop.individuals[order.front()];
      pop.best_fitness = best;
      best_spread = spread[order.front()];
    }
    const double mean = std::accumulate(pop.fitness.begin(), pop.fitness.end(), 0.0) / np;
    result.history.push_back({gen, pop.best_fitness, mean});

    if (gen >= config.max_generations || stall >= config.stall_generations) {
      result.generations_used = gen;
      break;
    }

    std::vector<PlacementMatrix> next;
    next.reserve(np);
    for (std::size_t e = 0; e < ne; ++e) next.push_back(pop.individuals[order[e]]);
    if (2 * nc + nm > 0) {
      auto parents = sus_select(pop.fitness, 2 * nc + nm, rng);
      std::shuffle(parents.begin(), parents.end(), rng);
      for (std::size_t c = 0; c < nc; ++c)
        next.push_back(crossover(pop.individuals[parents[2 * c]],
                                 pop.individuals[parents[2 * c + 1]], rng));
      for (std::size_t m = 0; m < nm; ++m)
        next.push_back(mutate(pop.individuals[parents[2 * nc + m]], rng));
    }
    pop.individuals = std::move(next);
  }

  result.best = pop.best;
  result.point = evaluator.evaluate(result.best, eta);
  return result;
}

GaResult ga_optimize(const Scenario& scenario, double eta, const GaConfig& config) {
  Evaluator evaluator(scenario);
  return ga_optimize(evaluator, eta, config);
}

}  // namespace crancache
