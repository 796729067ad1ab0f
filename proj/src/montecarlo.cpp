#include "crancache/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "crancache/error.hpp"
#include "crancache/kernels/kernels.hpp"
#include "crancache/parallel.hpp"

namespace crancache {

void SimConfig::validate() const {
  if (fading_draws < 1) throw ValidationError("sim.fading_draws must be at least 1");
  if (location_draws < 1) throw ValidationError("sim.location_draws must be at least 1");
  if (request_draws < 1) throw ValidationError("sim.request_draws must be at least 1");
}

Rng substream(std::uint64_t seed, std::size_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

Estimate binomial_estimate(std::size_t hits, std::size_t samples) {
  Estimate e;
  e.samples = samples;
  if (samples == 0) return e;
  const double n = static_cast<double>(samples);
  e.value = static_cast<double>(hits) / n;
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / n);
  return e;
}

double sample_received_snr(std::span<const double> distances, const LinkBudget& link, Rng& rng) {
  std::exponential_distribution<double> fading(1.0);
  double snr = 0.0;
  for (double d : distances) snr += link.mean_snr(d) * fading(rng);
  return snr;
}

Polar sample_location(double radius, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = radius * std::sqrt(u(rng));
  return {rho, 2.0 * std::numbers::pi * u(rng)};
}

namespace {

// [begin, end) share of `total` draws handled by substream s.
std::pair<std::size_t, std::size_t> stream_range(std::size_t total, std::size_t s) {
  return {total * s / kSimStreams, total * (s + 1) / kSimStreams};
}

}  // namespace

std::vector<Estimate> empirical_cdf(std::span<const double> distances, const LinkBudget& link,
                                    std::span<const double> gammas, std::size_t draws,
                                    std::uint64_t seed) {
  if (draws < 1) throw ValidationError("empirical_cdf: draws must be at least 1");
  std::vector<double> means;
  for (double d : distances) {
    if (!(d > 0.0)) throw ValidationError("empirical_cdf: distances must be positive");
    means.push_back(link.mean_snr(d));
  }
  std::vector<std::vector<std::size_t>> hits(kSimStreams, std::vector<std::size_t>(gammas.size(), 0));
  parallel_for(kSimStreams, [&](std::size_t s) {
    auto rng = substream(seed, s);
    std::exponential_distribution<double> fading(1.0);
    const auto [begin, end] = stream_range(draws, s);
    const std::size_t n = end - begin;
    std::vector<double> snr(n, 0.0), h(n);
    for (double m : means) {
      for (auto& x : h) x = fading(rng);
      kernels::scaled_add(snr, m, h);
    }
    for (std::size_t g = 0; g < gammas.size(); ++g)
      hits[s][g] = kernels::count_below(snr, gammas[g]);
  });
  std::vector<Estimate> out(gammas.size());
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    std::size_t total = 0;
    for (const auto& hs : hits) total += hs[g];
    out[g] = binomial_estimate(total, draws);
  }
  return out;
}

Estimate empirical_service_outage(std::span<const std::size_t> members, const Scenario& scenario,
                                  std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("empirical outage: samples must be at least 1");
  const auto& layout = scenario.layout;
  const LinkBudget link(scenario.radio, layout.size(), layout.radius());
  std::vector<std::size_t> service(members.begin(), members.end());
  if (service.empty())
    for (std::size_t n = 0; n < layout.size(); ++n) service.push_back(n);

  std::array<std::size_t, kSimStreams> hits{};
  parallel_for(kSimStreams, [&](std::size_t s) {
    auto rng = substream(seed, s);
    std::exponential_distribution<double> fading(1.0);
    const auto [begin, end] = stream_range(samples, s);
    std::vector<double> snr(end - begin);
    for (auto& x : snr) {
      const Point user = to_cartesian(sample_location(layout.radius(), rng));
      double sum = 0.0;
      for (std::size_t n : service) {
        const double d = distance(user, layout.points()[n]);
        sum += link.mean_snr(d) * fading(rng);
      }
      x = sum;
    }
    hits[s] = kernels::count_below(snr, link.threshold);
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return binomial_estimate(total, samples);
}

Estimate empirical_cell_outage(const PlacementMatrix& placement, std::size_t l,
                               const Scenario& scenario, const SimConfig& sim) {
  sim.validate();
  if (l >= placement.files()) throw ValidationError("empirical_cell_outage: file index out of range");
  const std::size_t per_location = (sim.fading_draws + sim.location_draws - 1) / sim.location_draws;
  return empirical_service_outage(service_set(placement, l).members, scenario,
                                  sim.location_draws * per_location, sim.seed);
}

ObjectiveEstimate empirical_objective(const PlacementMatrix& placement, double eta,
                                      const Scenario& scenario, const SimConfig& sim) {
  sim.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  const auto& layout = scenario.layout;
  const auto& p = scenario.library.popularity;
  if (placement.files() != p.size() || placement.rrhs() != layout.size())
    throw ValidationError("placement: shape does not match the scenario (L x N)");
  const LinkBudget link(scenario.radio, layout.size(), layout.radius());
  std::vector<ServiceSet> sets;
  for (std::size_t l = 0; l < p.size(); ++l) sets.push_back(service_set(placement, l));

  struct Tally {
    std::size_t outages = 0, fronthaul = 0;
    double value = 0.0, value_sq = 0.0;
  };
  std::array<Tally, kSimStreams> tally{};
  parallel_for(kSimStreams, [&](std::size_t s) {
    auto rng = substream(sim.seed, s);
    std::discrete_distribution<std::size_t> request(p.begin(), p.end());
    std::exponential_distribution<double> fading(1.0);
    const auto [begin, end] = stream_range(sim.request_draws, s);
    Tally t;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& set = sets[request(rng)];
      const Point user = to_cartesian(sample_location(layout.radius(), rng));
      double snr = 0.0;
      for (std::size_t n : set.members) snr += link.mean_snr(distance(user, layout.points()[n])) * fading(rng);
      const bool out = snr < link.threshold;
      const double v = eta * (out ? 1.0 : 0.0) + (1.0 - eta) * (set.uses_fronthaul ? 1.0 : 0.0);
      t.outages += out;
      t.fronthaul += set.uses_fronthaul;
      t.value += v;
      t.value_sq += v * v;
    }
    tally[s] = t;
  });
  Tally total;
  for (const auto& t : tally) {
    total.outages += t.outages;
    total.fronthaul += t.fronthaul;
    total.value += t.value;
    total.value_sq += t.value_sq;
  }
  const std::size_t n = sim.request_draws;
  const auto o = binomial_estimate(total.outages, n);
  const auto f = binomial_estimate(total.fronthaul, n);
  ObjectiveEstimate est;
  est.samples = n;
  est.mean = make_point(o.value, f.value, eta);
  est.outage_error = o.std_error;
  est.fronthaul_error = f.std_error;
  if (n > 1) {
    const double dn = static_cast<double>(n);
    const double var = std::max(0.0, (total.value_sq - total.value * total.value / dn) / (dn - 1.0));
    est.std_error = std::sqrt(var / dn);
  }
  return est;
}

}  // namespace crancache
