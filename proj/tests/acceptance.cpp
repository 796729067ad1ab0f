// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crancache/analytics.hpp"
#include "crancache/error.hpp"
#include "crancache/montecarlo.hpp"
#include "crancache/objective.hpp"
#include "crancache/quadrature.hpp"
#include "crancache/solvers.hpp"
#include "json.hpp"

using namespace crancache;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario three_rrh(double beta = 1.5) {
  return Scenario{FileLibrary(9, beta),
                  RrhLayout({{0.25, 0.0}, {1.0 / 3.0, 2.0 * kPi / 3.0}, {0.5, 4.0 * kPi / 3.0}},
                            {2, 2, 2}, 1.0),
                  RadioConfig{}};
}

Scenario seven_rrh(double beta = 1.5, std::size_t grid = 6) {
  std::vector<Polar> p{{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) p.push_back({2.0 / 3.0, k * kPi / 3.0});
  Scenario s{FileLibrary(50, beta), RrhLayout(p, std::vector<std::size_t>(7, 5), 1.0),
             RadioConfig{}};
  s.grid_u = s.grid_v = grid;
  return s;
}

std::vector<double> eta_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

Outcome cdf_agreement() {
  const std::array<std::pair<const char*, std::vector<double>>, 3> sets{{
      {"D1", {0.8, 0.8, 0.8, 0.8, 0.8, 0.8}},
      {"D2", {0.6, 0.7, 0.7, 0.8, 0.8, 0.8}},
      {"D3", {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}},
  }};
  const LinkBudget link(RadioConfig{}, 6, 1.0);
  std::vector<double> gammas;
  for (int i = 0; i < 20; ++i) gammas.push_back(db_to_linear(-10.0 + 25.0 * i / 19.0));
  Outcome out;
  std::uint64_t seed = 11;
  for (const auto& [tag, d] : sets) {
    const auto sp = partial_fraction(group_poles(d, link));
    const auto emp = empirical_cdf(d, link, gammas, 1'000'000, seed++);
    double sup = 0.0;
    for (std::size_t i = 0; i < gammas.size(); ++i)
      sup = std::max(sup, std::abs(snr_cdf(sp, gammas[i]) - emp[i].value));
    out.pass = out.pass && sup <= 0.005;
    out.detail += fmt("%s sup %.2e  ", tag, sup);
  }
  return out;
}

Outcome residue_identities() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> order(1, 8), mult(1, 4);
  std::uniform_real_distribution<double> log_rate(std::log(0.05), std::log(5.0));
  double worst_sum = 0.0, worst_mgf = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<PoleGroup> groups;
    const std::size_t target = order(rng);
    std::size_t total = 0;
    while (total < target) {
      const std::size_t j = std::min(mult(rng), target - total);
      double r = 0.0;
      bool clash = true;
      while (clash) {
        r = std::exp(log_rate(rng));
        clash = false;
        for (const auto& g : groups) clash = clash || std::abs(g.rate - r) < 0.2 * std::max(r, g.rate);
      }
      groups.push_back({r, j});
      total += j;
    }
    const auto sp = partial_fraction(groups);
    worst_sum = std::max(worst_sum, std::abs(sp.residue_sum() - 1.0));
    double lo = groups.front().rate;
    for (const auto& g : groups) lo = std::min(lo, g.rate);
    for (int k = 0; k < 10; ++k) {
      const double s = (-1.0 + 1.9 * k / 9.0) * lo;
      const double exact = mgf_product(groups, s);
      worst_mgf = std::max(worst_mgf, std::abs(sp.mgf(s) - exact) / std::abs(exact));
    }
  }
  return {worst_sum <= 1e-9 && worst_mgf <= 1e-9,
          fmt("1000 spectra, max |sum A - 1| %.2e, max MGF rel err %.2e", worst_sum, worst_mgf)};
}

Outcome distinct_path() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.05, 1.5);
  std::uniform_int_distribution<std::size_t> count(1, 8);
  const LinkBudget link(RadioConfig{}, 7, 1.0);
  double worst = 0.0;
  int tested = 0;
  while (tested < 1000) {
    std::vector<double> dist(count(rng));
    for (auto& x : dist) x = d(rng);
    const auto groups = group_poles(dist, link);
    if (groups.size() != dist.size()) continue;
    ++tested;
    std::vector<double> means;
    for (double x : dist) means.push_back(link.mean_snr(x));
    const auto sp = partial_fraction(groups);
    for (double g : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0})
      worst = std::max(worst, std::abs(snr_cdf_distinct(means, g) - snr_cdf(sp, g)));
  }
  return {worst <= 1e-10, fmt("1000 configurations, max |F_fast - F_general| %.2e", worst)};
}

Outcome quadrature_normalization() {
  const auto one = [](double, double) { return 1.0; };
  const double n6 = integrate(build_grid(1.0, 6, 6), one);
  const double n32 = integrate(build_grid(1.0, 32, 32), one);
  const Evaluator coarse(seven_rrh(1.5, 6)), fine(seven_rrh(1.5, 24));
  const auto& layout = coarse.scenario().layout;
  const auto mpc = mpc_placement(layout, 50), lcd = lb_lcd_placement(layout, 50);
  const double d_mpc = std::abs(coarse.metrics(mpc).cell_outage - fine.metrics(mpc).cell_outage);
  const double d_lcd = std::abs(coarse.metrics(lcd).cell_outage - fine.metrics(lcd).cell_outage);
  return {std::abs(n6 - 1.0) <= 1e-3 && std::abs(n32 - 1.0) <= 1e-6 && d_mpc < 5e-3 && d_lcd < 5e-3,
          fmt("|1-I6| %.1e, |1-I32| %.1e, refinement 6->24 MPC %.4f, LB-LCD %.4f", std::abs(n6 - 1.0),
              std::abs(n32 - 1.0), d_mpc, d_lcd)};
}

Outcome beta_invariance() {
  std::vector<double> mpc;
  for (double beta : {0.0, 1.5, 3.0}) {
    const Evaluator ev(seven_rrh(beta));
    mpc.push_back(ev.metrics(mpc_placement(ev.scenario().layout, 50)).cell_outage);
  }
  const double spread = *std::ranges::max_element(mpc) - *std::ranges::min_element(mpc);
  const Evaluator b0(seven_rrh(0.0)), b2(seven_rrh(2.0));
  const double lcd0 = b0.metrics(lb_lcd_placement(b0.scenario().layout, 50)).cell_outage;
  const double lcd2 = b2.metrics(lb_lcd_placement(b2.scenario().layout, 50)).cell_outage;
  return {spread <= 1e-10 && lcd0 < lcd2,
          fmt("MPC spread %.1e, LB-LCD beta=0 %.4f < beta=2 %.4f", spread, lcd0, lcd2)};
}

Outcome fronthaul_closed_forms() {
  double worst = 0.0;
  double mpc3 = 0.0, lcd3 = 0.0;
  for (double beta : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    const auto s = seven_rrh(beta);
    const auto mpc = mpc_placement(s.layout, 50), lcd = lb_lcd_placement(s.layout, 50);
    const double f_mpc = fronthaul_expectation(mpc, s.library);
    const double f_lcd = fronthaul_expectation(lcd, s.library);
    worst = std::max({worst, std::abs(f_mpc - s.library.mass(5, 50)),
                      std::abs(f_lcd - s.library.mass(35, 50))});
    if (beta == 3.0) mpc3 = f_mpc, lcd3 = f_lcd;
  }
  return {worst <= 1e-15 && mpc3 < 0.01 && lcd3 < 0.01,
          fmt("max closed-form gap %.1e, beta=3 MPC %.4f, LB-LCD %.5f", worst, mpc3, lcd3)};
}

Outcome zipf_sums() {
  Outcome out;
  const std::array<std::pair<double, double>, 3> cases{{{2.0, 0.90}, {2.5, 0.96}, {3.0, 0.99}}};
  for (const auto& [beta, expect] : cases) {
    const double m = FileLibrary(50, beta).mass(0, 5);
    out.pass = out.pass && std::abs(m - expect) <= 0.005;
    out.detail += fmt("beta %.1f: %.4f  ", beta, m);
  }
  return out;
}

Outcome pareto_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const Evaluator ev(three_rrh());
  const auto all = enumerate_placements(ev);
  std::vector<TradeoffPoint> pts;
  for (const auto& c : all) pts.push_back({c.metrics.cell_outage, c.metrics.fronthaul});
  const auto front = pareto_filter(pts);
  const auto hull = supported_points(pts);
  return {front.size() == 5 && seconds_since(t0) < 60.0,
          fmt("%zu candidates, %zu nondominated points, %zu of them supported (on the convex hull), %.1fs",
              all.size(), front.size(), hull.size(), seconds_since(t0))};
}

Outcome crossover_weights() {
  const Evaluator v(three_rrh()), iv(seven_rrh());
  const auto cv = eta_crossover(v), civ = eta_crossover(iv);
  if (!cv || !civ) return {false, "no crossover found"};
  double gap = 0.0;
  for (const auto& c : {*cv, *civ}) {
    const auto m = make_point(c.mpc.cell_outage, c.mpc.fronthaul, c.eta0);
    const auto l = make_point(c.lb_lcd.cell_outage, c.lb_lcd.fronthaul, c.eta0);
    gap = std::max(gap, std::abs(m.value - l.value));
  }
  return {std::abs(cv->eta0 - 0.3312) <= 0.005 && std::abs(civ->eta0 - 0.23) <= 0.01 && gap <= 1e-9,
          fmt("three-RRH eta0 %.4f (expect 0.3312), seven-RRH eta0 %.4f (expect 0.23), max objective gap %.1e",
              cv->eta0, civ->eta0, gap)};
}

Outcome reference_values() {
  const std::array<double, 11> reference{0.0689, 0.1186, 0.1651, 0.1938, 0.2087, 0.2144,
                                        0.2077, 0.1905, 0.1733, 0.1561, 0.1390};
  const std::array<const char*, 11> placements{
      "[[1,3,5],[2,4,6]]", "[[1,3,5],[2,4,6]]", "[[1,1,4],[2,3,5]]", "[[1,1,1],[2,3,4]]",
      "[[1,1,1],[2,3,4]]", "[[1,1,1],[3,2,2]]", "[[1,1,1],[2,2,2]]", "[[1,1,1],[2,2,2]]",
      "[[1,1,1],[2,2,2]]", "[[1,1,1],[2,2,2]]", "[[1,1,1],[2,2,2]]"};
  const auto t0 = std::chrono::steady_clock::now();
  const Evaluator ev(three_rrh());
  const auto mpc = mpc_placement(ev.scenario().layout, 9);
  const auto lcd = lb_lcd_placement(ev.scenario().layout, 9);
  bool values_ok = true, modes_ok = true;
  int exact = 0;
  double worst = 0.0;
  std::string off;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double eta = i / 10.0;
    const auto r = ga_optimize(ev, eta, GaConfig{});
    const double err = r.point.value - reference[i];
    worst = std::max(worst, std::abs(err));
    if (std::abs(err) > 0.003) {
      values_ok = false;
      off += fmt(" eta=%.1f:%+.4f", eta, err);
    }
    if (eta >= 0.6 - 1e-12 && r.best != mpc) modes_ok = false;
    if (eta <= 0.1 + 1e-12 && r.best != lcd) modes_ok = false;
    exact += r.best.to_table_string() == placements[i];
  }
  const double secs = seconds_since(t0);
  return {values_ok && modes_ok && secs < 120.0,
          fmt("max |f - reference| %.4f, MPC/LB-LCD modes %s, %d/11 placements identical to the reference, "
              "%.1fs; outside +-0.003:%s",
              worst, modes_ok ? "recovered" : "missed", exact, secs, off.empty() ? " none" : off.c_str())};
}

Outcome ga_vs_oracle() {
  Rng rng(2024);
  std::size_t pairs = 0, pairs_ok = 0, runs = 0, matched = 0;
  double worst = 1.0;
  std::string weak;
  for (int s = 0; s < 10; ++s) {
    std::uniform_int_distribution<int> nd(1, 3), md(1, 3);
    const int n = nd(rng), m = md(rng);
    std::uniform_int_distribution<int> ld(n * m, 12);
    const int files = ld(rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Polar> pos;
    for (int k = 0; k < n; ++k) pos.push_back({0.1 + 0.8 * u(rng), 2.0 * kPi * u(rng)});
    const double beta = 2.0 * u(rng);
    const Evaluator ev(Scenario{FileLibrary(files, beta),
                                RrhLayout(pos, std::vector<std::size_t>(n, m), 1.0), RadioConfig{}});
    for (double eta : eta_grid()) {
      const double best = exhaustive_search(ev, eta).point.value;
      std::size_t ok = 0;
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        GaConfig c;
        c.seed = seed;
        const double v = ga_optimize(ev, eta, c).point.value;
        ok += v <= best + 1e-9;
        if (best > 0.0) worst = std::max(worst, v / best);
      }
      ++pairs;
      runs += 20;
      matched += ok;
      if (ok >= 19) ++pairs_ok;
      else weak += fmt(" s%d(N=%d,M=%d,L=%d) eta=%.1f:%zu/20", s, n, m, files, eta, ok);
    }
  }
  return {pairs_ok == pairs && worst <= 1.02,
          fmt("%zu/%zu (scenario, eta) pairs with >= 19/20 seeds optimal, %zu/%zu runs optimal, worst "
              "ratio %.4f; below 95%%:%s",
              pairs_ok, pairs, matched, runs, worst, weak.empty() ? " none" : weak.c_str())};
}

Outcome baseline_ordering() {
  const Evaluator ev(seven_rrh());
  Outcome out;
  for (double eta : {0.4, 1.0}) {
    const double ga = ga_optimize(ev, eta, GaConfig{}).point.value;
    const double need = eta < 0.5 ? 0.10 : 0.50;
    out.detail += fmt("eta %.1f GA %.4f", eta, ga);
    for (auto b : {Baseline::Random, Baseline::Probabilistic}) {
      Rng rng(eta < 0.5 ? 40 : 100);
      const auto est = baseline_expected_objective(b, ev, eta, 2000, rng);
      const double gap = 1.0 - ga / est.mean.value;
      out.pass = out.pass && ga <= est.mean.value - 2.0 * est.std_error && gap >= need;
      out.detail += fmt(", %s %.4f+-%.4f gap %.1f%%", baseline_name(b), est.mean.value,
                        est.std_error, 100.0 * gap);
    }
    out.detail += "; ";
  }
  return out;
}

Outcome convergence() {
  const Evaluator ev(seven_rrh());
  std::vector<double> converged, used;
  bool accounting = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GaConfig c;
    c.seed = seed;
    const auto r = ga_optimize(ev, 0.5, c);
    converged.push_back(static_cast<double>(r.converged_generation));
    used.push_back(static_cast<double>(r.generations_used));
    accounting = accounting && r.evaluations == c.population_size * r.generations_used;
  }
  const auto median = [](std::vector<double> v) {
    std::ranges::sort(v);
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  const double med = median(converged);
  return {med <= 30.0 && accounting,
          fmt("eta 0.5, 20 seeds: median last-improving generation %.1f, median generations run %.1f "
              "(includes the 20-generation stall window), evaluations = 50 x generations %s",
              med, median(used), accounting ? "holds" : "broken")};
}

Outcome budget_refusal() {
  const fs::path out = fs::temp_directory_path() / "crancache_acceptance_budget";
  fs::remove_all(out);
  const std::string cmd = std::string(CRANCACHE_CLI_PATH) + " exhaustive --scenario " +
                          (fs::path(CRANCACHE_PRESET_DIR) / "fig6_9.json").string() + " --out " +
                          out.string() + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out / "error.json");
  if (!in) return {false, fmt("exit code %d, no error.json", code)};
  const auto err = nlohmann::json::parse(in);
  const double count = err.value("candidate_count", 0.0);
  return {code == 3 && std::abs(count / 1.92e44 - 1.0) <= 0.01,
          fmt("exit code %d, counted %.4e", code, count)};
}

}  // namespace

int main() {
  const std::array<std::pair<const char*, std::function<Outcome()>>, 14> criteria{{
      {"CDF agreement", cdf_agreement},
      {"residue identities", residue_identities},
      {"distinct-path equivalence", distinct_path},
      {"quadrature normalization", quadrature_normalization},
      {"MPC beta-invariance", beta_invariance},
      {"fronthaul closed forms", fronthaul_closed_forms},
      {"Zipf partial sums", zipf_sums},
      {"Pareto reproduction", pareto_reproduction},
      {"crossover weights", crossover_weights},
      {"three-RRH reference values", reference_values},
      {"GA vs exhaustive oracle", ga_vs_oracle},
      {"baseline ordering", baseline_ordering},
      {"GA convergence", convergence},
      {"budget refusal", budget_refusal},
  }};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
