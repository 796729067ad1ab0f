#pragma once

/// @file solvers.hpp
/// Placement strategies: the genetic algorithm, exhaustive enumeration, MPC /
/// LB-LCD mode selection and the random / probabilistic baselines.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crancache/model.hpp"
#include "crancache/objective.hpp"

namespace crancache {

struct GaConfig {
  std::size_t population_size = 50;
  std::size_t elite_count = 10;
  double crossover_fraction = 0.85;
  std::size_t max_generations = 100;
  std::size_t stall_generations = 20;
  double stall_tolerance = 1e-9;
  std::uint64_t seed = 1;
  bool seed_with_canonical = true;

  void validate() const;
  /// N_c = round(f_c (N_p - N_e)).
  std::size_t crossover_count() const;
  /// N_m = N_p - N_e - N_c.
  std::size_t mutation_count() const;
};

struct GaPopulation {
  std::vector<PlacementMatrix> individuals;
  std::vector<double> fitness;  ///< empty until evaluated
  std::size_t generation = 0;
  PlacementMatrix best;
  double best_fitness = 0.0;
};

GaPopulation ga_initial_population(const GaConfig& config, const Scenario& scenario, Rng& rng);

/// Two-point splice per column over rows [0, L') followed by the repair steps.
/// M_n and L' are read from the parents' column sums.
PlacementMatrix crossover(const PlacementMatrix& parent1, const PlacementMatrix& parent2, Rng& rng);

/// Flips one row in [0, L') per column, then repairs.
PlacementMatrix mutate(const PlacementMatrix& individual, Rng& rng);

/// Restores column sum `target`: clears cached rows from the bottom while the
/// sum is too large, then fills empty rows from the top while it is too small.
void repair_column(std::span<std::uint8_t> column, std::size_t target);

/// Expected selection counts of `count` stochastic-universal-sampling pointers
/// under linear rank scaling (weight n - rank, 0-based ranks, ties averaged).
std::vector<double> sus_expectations(std::span<const double> fitness, std::size_t count);

/// Indices of `count` individuals chosen by one SUS spin, in wheel order.
std::vector<std::size_t> sus_select(std::span<const double> fitness, std::size_t count, Rng& rng);

struct GenerationRecord {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
};

struct GaResult {
  PlacementMatrix best;
  ObjectivePoint point;
  std::size_t generations_used = 0;
  /// Last generation whose best fitness improved by at least the stall tolerance.
  std::size_t converged_generation = 0;
  std::size_t evaluations = 0;
  std::vector<GenerationRecord> history;
};

/// Elites and the returned best are ordered by (objective, outage + fronthaul,
/// matrix), matching the exhaustive tie-break.
GaResult ga_optimize(const Evaluator& evaluator, double eta, const GaConfig& config);
GaResult ga_optimize(const Scenario& scenario, double eta, const GaConfig& config);

inline constexpr double kDefaultSearchBudget = 1e7;

struct SearchOptions {
  double budget = kDefaultSearchBudget;
  /// Enumerate all L rows instead of rows [0, L').
  bool full_rows = false;
};

/// Product over columns of C(rows, M_n), as a double.
double candidate_count(std::span<const std::size_t> cache_sizes, std::size_t rows);

struct SearchResult {
  PlacementMatrix best;
  ObjectivePoint point;
  double candidates = 0.0;
};

/// Exact optimum by enumeration. Objective ties within 1e-12 go to the lower
/// outage + fronthaul sum (so eta = 1 yields MPC and eta = 0 LB-LCD), then to
/// the lexicographically smallest matrix. Throws BudgetExceeded when the count is above the budget.
SearchResult exhaustive_search(const Evaluator& evaluator, double eta, const SearchOptions& options = {});
SearchResult exhaustive_search(const Scenario& scenario, double eta, const SearchOptions& options = {});

struct Candidate {
  PlacementMatrix placement;
  PlacementMetrics metrics;
};

/// Every feasible placement with its metrics, subject to the same budget.
std::vector<Candidate> enumerate_placements(const Evaluator& evaluator,
                                            const SearchOptions& options = {});

/// Visits every feasible placement in enumeration order.
void for_each_placement(const Scenario& scenario, const SearchOptions& options,
                        const std::function<void(const PlacementMatrix&)>& visit);

struct ModeSelection {
  PlacementMatrix placement;
  ObjectivePoint point;
  std::optional<double> eta0;  ///< empty when no crossover exists
  bool chose_mpc = true;
};

/// LB-LCD when eta <= eta0, MPC otherwise (MPC when no crossover exists).
ModeSelection mode_select(const Evaluator& evaluator, double eta);

enum class Baseline { Random, Probabilistic };

const char* baseline_name(Baseline b) noexcept;
Baseline parse_baseline(const std::string& name);

struct BaselineEstimate {
  ObjectivePoint mean;
  double std_error = 0.0;  ///< of the objective value
  std::size_t draws = 0;
};

BaselineEstimate baseline_expected_objective(Baseline strategy, const Evaluator& evaluator,
                                             double eta, std::size_t draws, Rng& rng);

}  // namespace crancache
