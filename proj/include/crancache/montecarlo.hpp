#pragma once

/// @file montecarlo.hpp
/// Simulation oracle: Rayleigh fading, area-uniform user locations and Zipf
/// requests. Draws are split over a fixed number of substreams seeded from
/// (seed, stream), so estimates depend only on the seed, not on threading.

#include <cstdint>
#include <span>
#include <vector>

#include "crancache/analytics.hpp"
#include "crancache/model.hpp"
#include "crancache/objective.hpp"

namespace crancache {

struct SimConfig {
  std::size_t fading_draws = 1'000'000;
  std::size_t location_draws = 10'000;
  std::size_t request_draws = 10'000;
  std::uint64_t seed = 1;

  void validate() const;
};

inline constexpr std::size_t kSimStreams = 16;

/// Generator for substream `stream` of `seed`.
Rng substream(std::uint64_t seed, std::size_t stream);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Binomial estimate from `hits` out of `samples`.
Estimate binomial_estimate(std::size_t hits, std::size_t samples);

/// One draw of sum_n gamma_0 S_n |h_n|^2 with |h_n|^2 standard exponential.
double sample_received_snr(std::span<const double> distances, const LinkBudget& link, Rng& rng);

/// Uniform location in the disk of radius R (rho = R sqrt(u)).
Polar sample_location(double radius, Rng& rng);

/// Empirical CDF of the received SNR at each gamma from `draws` fading draws
/// with fixed distances.
std::vector<Estimate> empirical_cdf(std::span<const double> distances, const LinkBudget& link,
                                    std::span<const double> gammas, std::size_t draws,
                                    std::uint64_t seed);

/// Outage of file l averaged over uniform locations and fading. Each of
/// `location_draws * ceil(fading_draws / location_draws)` samples uses a
/// fresh location, so the binomial standard error is exact.
Estimate empirical_cell_outage(const PlacementMatrix& placement, std::size_t l,
                               const Scenario& scenario, const SimConfig& sim);

/// Outage of the service set `members` averaged over uniform locations.
Estimate empirical_service_outage(std::span<const std::size_t> members, const Scenario& scenario,
                                  std::size_t samples, std::uint64_t seed);

struct ObjectiveEstimate {
  ObjectivePoint mean;
  double std_error = 0.0;       ///< of the objective value
  double outage_error = 0.0;    ///< of the cell outage
  double fronthaul_error = 0.0; ///< of the fronthaul usage
  std::size_t samples = 0;
};

/// Samples (request, location, fading) triples and averages
/// eta 1{outage} + (1 - eta) T_l over `request_draws` triples.
ObjectiveEstimate empirical_objective(const PlacementMatrix& placement, double eta,
                                      const Scenario& scenario, const SimConfig& sim);

}  // namespace crancache
