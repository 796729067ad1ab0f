#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crancache/error.hpp"
#include "crancache/kernels/kernels.hpp"
#include "crancache/parallel.hpp"
#include "json.hpp"

#ifndef CRANCACHE_PRESET_DIR
#define CRANCACHE_PRESET_DIR "scenarios"
#endif

namespace crancache::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kDefaultBaselineDraws = 200;
constexpr double kDefaultGaEta = 0.5;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string placement_text(const PlacementMatrix& a) {
  for (std::size_t n = 1; n < a.rrhs(); ++n)
    if (a.column_sum(n) != a.column_sum(0)) return a.to_string();
  return a.to_table_string();
}

using Row = std::vector<std::string>;

/// Collects CSV files and the manifest for one invocation.
class Output {
 public:
  Output(const Options& opt, const ScenarioFile& file, json options)
      : dir_(opt.out), command_(opt.command), options_(std::move(options)) {
    config_ = json::parse(scenario_to_json(file));
    seed_ = file.ga.seed;
    fs::create_directories(dir_);
  }

  void csv(const std::string& name, const Row& columns, const std::vector<Row>& rows,
           const std::vector<std::string>& notes = {}) {
    std::ofstream out(dir_ / name);
    if (!out) throw ValidationError("cannot write " + (dir_ / name).string());
    out << "# crancache " << command_ << "\n";
    out << "# seed: " << seed_ << "\n";
    out << "# options: " << options_.dump() << "\n";
    out << "# config: " << config_.dump() << "\n";
    for (const auto& n : notes) out << "# " << n << "\n";
    write_row(out, columns);
    for (const auto& r : rows) write_row(out, r);
    files_.push_back(name);
  }

  json& results() { return results_; }

  void finish() {
    json manifest = {{"command", command_}, {"seed", seed_},         {"options", options_},
                     {"config", config_},   {"files", files_},       {"results", results_},
                     {"isa", kernels::isa_name(kernels::active_isa())}};
    std::ofstream(dir_ / "manifest.json") << manifest.dump(2) << "\n";
  }

 private:
  static void write_row(std::ostream& out, const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }

  fs::path dir_;
  std::string command_;
  json options_;
  json config_;
  json results_ = json::object();
  std::vector<std::string> files_;
  std::uint64_t seed_ = 0;
};

std::vector<double> etas_for(const Options& opt, const ScenarioFile& file) {
  return opt.eta ? parse_eta(*opt.eta) : file.eta_grid;
}

SearchOptions search_options(const Options& opt) {
  SearchOptions s;
  if (opt.budget) s.budget = *opt.budget;
  s.full_rows = opt.full_rows;
  return s;
}

void validate_analytics(const Options& opt, const ScenarioFile& file, Output& out) {
  const auto& sc = file.scenario;
  if (file.cdf.distance_sets.empty())
    throw ValidationError("cdf.distance_sets: required by validate-analytics");
  const LinkBudget link(sc.radio, sc.layout.size(), sc.layout.radius());
  const std::size_t draws = opt.draws.value_or(file.sim.fading_draws);
  std::vector<double> gamma_db, gamma;
  for (std::size_t i = 0; i < file.cdf.points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(file.cdf.points - 1);
    gamma_db.push_back(file.cdf.gamma_db_min + t * (file.cdf.gamma_db_max - file.cdf.gamma_db_min));
    gamma.push_back(db_to_linear(gamma_db.back()));
  }
  std::vector<Row> rows;
  json sup = json::object();
  for (const auto& set : file.cdf.distance_sets) {
    std::vector<double> d;
    for (double x : set.distances) d.push_back(x * sc.layout.radius());
    const auto spectrum = partial_fraction(group_poles(d, link));
    const auto emp = empirical_cdf(d, link, gamma, draws, file.sim.seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      const double f = snr_cdf(spectrum, gamma[i]);
      worst = std::max(worst, std::abs(f - emp[i].value));
      rows.push_back({num(gamma_db[i]), num(f), num(emp[i].value), num(emp[i].std_error), set.tag});
    }
    sup[set.tag] = worst;
  }
  out.csv("cdf.csv", {"gamma_db", "analytic_cdf", "empirical_cdf", "std_err", "scenario_tag"}, rows);
  out.results()["sup_norm"] = sup;
  out.results()["draws"] = draws;
}

void cell_metrics(const Options& opt, const ScenarioFile& file, Output& out) {
  const auto& base = file.scenario;
  auto betas = file.sweep.beta;
  if (betas.empty()) betas.push_back(base.library.beta);
  auto thresholds = file.sweep.gamma_th_db;
  if (thresholds.empty()) thresholds.push_back(base.radio.gamma_th_db);

  std::vector<Row> rows;
  for (double beta : betas)
    for (double gth : thresholds) {
      Scenario sc = base;
      sc.library = FileLibrary(base.library.size(), beta);
      sc.radio.gamma_th_db = gth;
      const Evaluator ev(sc, file.theta_offset);
      const std::size_t files = sc.library.size();
      for (const auto& [name, a] : {std::pair{"MPC", mpc_placement(sc.layout, files)},
                                    std::pair{"LB-LCD", lb_lcd_placement(sc.layout, files)}}) {
        const auto m = ev.metrics(a);
        Row r{num(beta), num(gth), name, num(m.cell_outage), num(m.fronthaul), "", ""};
        if (opt.draws) {
          SimConfig sim = file.sim;
          sim.request_draws = *opt.draws;
          const auto e = empirical_objective(a, 1.0, sc, sim);
          r[5] = num(e.mean.cell_outage);
          r[6] = num(e.outage_error);
        }
        rows.push_back(std::move(r));
      }
    }
  out.csv("cell_metrics.csv",
          {"beta", "gamma_th_db", "scheme", "cell_outage", "fronthaul", "empirical_outage", "std_err"},
          rows);
}

void pareto(const Options& opt, const ScenarioFile& file, Output& out) {
  const Evaluator ev(file.scenario, file.theta_offset);
  const auto candidates = enumerate_placements(ev, search_options(opt));
  std::vector<TradeoffPoint> points;
  for (const auto& c : candidates) points.push_back({c.metrics.cell_outage, c.metrics.fronthaul});
  const auto front = pareto_filter(points);
  const auto hull = supported_points(points);
  auto contains = [](const std::vector<TradeoffPoint>& set, const TradeoffPoint& p) {
    return std::binary_search(set.begin(), set.end(), p);
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    rows.push_back({quoted(placement_text(candidates[i].placement)), num(points[i].cell_outage),
                    num(points[i].fronthaul), contains(front, points[i]) ? "1" : "0",
                    contains(hull, points[i]) ? "1" : "0"});
  out.csv("pareto.csv", {"placement", "cell_outage", "fronthaul", "nondominated", "supported"}, rows,
          {"nondominated: no other candidate is at least as good in both objectives and better in one",
           "supported: nondominated and optimal for some eta in [0, 1]"});
  std::vector<Row> front_rows;
  for (const auto& p : front)
    front_rows.push_back({num(p.cell_outage), num(p.fronthaul), contains(hull, p) ? "1" : "0"});
  out.csv("pareto_front.csv", {"cell_outage", "fronthaul", "supported"}, front_rows);
  out.results()["candidates"] = candidates.size();
  out.results()["nondominated_points"] = front.size();
  out.results()["supported_points"] = hull.size();
  std::cout << candidates.size() << " candidates, " << front.size() << " nondominated points, "
            << hull.size() << " supported\n";
}

void sweep_eta(const Options& opt, const ScenarioFile& file, Output& out) {
  const Evaluator ev(file.scenario, file.theta_offset);
  const auto& sc = file.scenario;
  const std::size_t draws = opt.draws.value_or(kDefaultBaselineDraws);
  const auto cross = eta_crossover(ev);
  const auto mpc = mpc_placement(sc.layout, sc.library.size());
  const auto lcd = lb_lcd_placement(sc.layout, sc.library.size());

  std::vector<Row> rows;
  const auto etas = etas_for(opt, file);
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double eta = etas[i];
    auto add = [&](const char* name, const ObjectivePoint& p, double se, const std::string& placement) {
      rows.push_back({num(eta), name, num(p.value), num(se), num(p.cell_outage), num(p.fronthaul),
                      placement.empty() ? "" : quoted(placement)});
    };
    const auto ga = ga_optimize(ev, eta, file.ga);
    add("ga", ga.point, 0.0, placement_text(ga.best));
    const auto mode = mode_select(ev, eta);
    add("mode_select", mode.point, 0.0, placement_text(mode.placement));
    add("mpc", ev.evaluate(mpc, eta), 0.0, placement_text(mpc));
    add("lb_lcd", ev.evaluate(lcd, eta), 0.0, placement_text(lcd));
    for (auto b : {Baseline::Random, Baseline::Probabilistic}) {
      auto rng = substream(file.sim.seed, 2 * i + (b == Baseline::Random ? 0 : 1));
      const auto est = baseline_expected_objective(b, ev, eta, draws, rng);
      add(baseline_name(b), est.mean, est.std_error, "");
    }
  }
  std::vector<std::string> notes;
  if (cross) {
    notes.push_back("eta0: " + num(cross->eta0));
    out.results()["eta0"] = cross->eta0;
    if (cross->eta0_equal_cache) out.results()["eta0_equal_cache"] = *cross->eta0_equal_cache;
  } else {
    notes.push_back("eta0: none (MPC and LB-LCD coincide)");
    out.results()["eta0"] = nullptr;
  }
  out.results()["baseline_draws"] = draws;
  out.csv("sweep_eta.csv",
          {"eta", "strategy", "objective", "std_err", "cell_outage", "fronthaul", "placement"}, rows,
          notes);
  if (cross) std::cout << "eta0 = " << num(cross->eta0) << "\n";
}

void ga_run(const Options& opt, const ScenarioFile& file, Output& out) {
  const Evaluator ev(file.scenario, file.theta_offset);
  const auto etas = opt.eta ? parse_eta(*opt.eta) : std::vector<double>{kDefaultGaEta};
  const double eta = etas.front();
  const auto r = ga_optimize(ev, eta, file.ga);
  std::vector<Row> hist;
  for (const auto& h : r.history) hist.push_back({std::to_string(h.generation), num(h.best), num(h.mean)});
  out.csv("ga_history.csv", {"generation", "best", "mean"}, hist);
  out.csv("ga_best.csv",
          {"eta", "objective", "cell_outage", "fronthaul", "generations_used", "converged_generation",
           "evaluations", "placement"},
          {{num(eta), num(r.point.value), num(r.point.cell_outage), num(r.point.fronthaul),
            std::to_string(r.generations_used), std::to_string(r.converged_generation),
            std::to_string(r.evaluations), quoted(placement_text(r.best))}});
  out.results()["objective"] = r.point.value;
  out.results()["placement"] = placement_text(r.best);
  out.results()["generations_used"] = r.generations_used;
  out.results()["evaluations"] = r.evaluations;
  std::cout << "eta " << num(eta) << ": objective " << num(r.point.value) << " "
            << placement_text(r.best) << " after " << r.generations_used << " generations\n";
}

void table5(const Options& opt, const ScenarioFile& file, Output& out) {
  const Evaluator ev(file.scenario, file.theta_offset);
  const auto search = search_options(opt);
  const double count = candidate_count(file.scenario.layout.cache_sizes(),
                                       search.full_rows ? file.scenario.library.size()
                                                        : file.scenario.layout.total_cache());
  const bool exact = count <= search.budget;
  std::vector<Row> rows;
  for (double eta : etas_for(opt, file)) {
    const auto ga = ga_optimize(ev, eta, file.ga);
    Row r{num(eta), num(ga.point.value), num(ga.point.cell_outage), num(ga.point.fronthaul),
          quoted(placement_text(ga.best)), "", ""};
    if (exact) {
      const auto ex = exhaustive_search(ev, eta, search);
      r[5] = num(ex.point.value);
      r[6] = quoted(placement_text(ex.best));
    }
    std::cout << "eta " << num(eta) << "  " << num(ga.point.value) << "  " << placement_text(ga.best)
              << "\n";
    rows.push_back(std::move(r));
  }
  out.csv("table5.csv",
          {"eta", "objective", "cell_outage", "fronthaul", "placement", "exhaustive_objective",
           "exhaustive_placement"},
          rows, {"placement: entry (m, n) is the m-th cached file of RRH n, 1-based"});
  out.results()["exhaustive_reference"] = exact;
}

void exhaustive(const Options& opt, const ScenarioFile& file, Output& out) {
  const Evaluator ev(file.scenario, file.theta_offset);
  std::vector<Row> rows;
  for (double eta : etas_for(opt, file)) {
    const auto r = exhaustive_search(ev, eta, search_options(opt));
    rows.push_back({num(eta), num(r.point.value), num(r.point.cell_outage), num(r.point.fronthaul),
                    quoted(placement_text(r.best)), num(r.candidates)});
  }
  out.csv("exhaustive.csv",
          {"eta", "objective", "cell_outage", "fronthaul", "placement", "candidates"}, rows);
}

void write_error(const Options& opt, const json& record) {
  std::cerr << record.dump() << "\n";
  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (!ec) std::ofstream(opt.out / "error.json") << record.dump(2) << "\n";
}

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Numerical: return "numerical";
  }
  return "unknown";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation: return kValidation;
    case ErrorKind::Budget: return kBudget;
    case ErrorKind::Numerical: return kNumerical;
  }
  return 1;
}

}  // namespace

std::vector<double> parse_eta(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ValidationError("--eta: cannot parse '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("--eta: range must be start:step:stop");
    const double start = to_double(parts[0]), step = to_double(parts[1]), stop = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw ValidationError("--eta: range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  }
  if (out.empty()) throw ValidationError("--eta: no values");
  for (double e : out)
    if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("--eta: values must lie in [0, 1]");
  return out;
}

fs::path resolve_scenario(const std::string& name) {
  if (fs::exists(name)) return name;
  for (const fs::path& dir : {fs::path("scenarios"), fs::path(CRANCACHE_PRESET_DIR)}) {
    const auto candidate = dir / (name + ".json");
    if (fs::exists(candidate)) return candidate;
  }
  throw ValidationError("--scenario: no file or preset named '" + name + "'");
}

int run(const Options& opt) {
  try {
    set_default_threads(opt.threads);
    auto file = load_scenario(resolve_scenario(opt.scenario));
    if (opt.seed) {
      file.ga.seed = *opt.seed;
      file.sim.seed = *opt.seed;
    }
    if (opt.quadrature) {
      std::size_t u = 0, v = 0;
      char x = 0, extra = 0;
      if (std::sscanf(opt.quadrature->c_str(), "%zu%c%zu%c", &u, &x, &v, &extra) != 3 || x != 'x')
        throw ValidationError("--quadrature: expected UxV, e.g. 6x6");
      if (u < 2 || v < 2 || u % 2 || v % 2)
        throw ValidationError("--quadrature: U and V must be even and at least 2");
      file.scenario.grid_u = u;
      file.scenario.grid_v = v;
    }

    json options = json::object();
    if (opt.eta) options["eta"] = parse_eta(*opt.eta);
    if (opt.draws) options["draws"] = *opt.draws;
    if (opt.budget) options["budget"] = *opt.budget;
    if (opt.full_rows) options["full_rows"] = true;

    Output out(opt, file, options);
    if (opt.command == "validate-analytics") validate_analytics(opt, file, out);
    else if (opt.command == "cell-metrics") cell_metrics(opt, file, out);
    else if (opt.command == "pareto") pareto(opt, file, out);
    else if (opt.command == "sweep-eta") sweep_eta(opt, file, out);
    else if (opt.command == "ga-run") ga_run(opt, file, out);
    else if (opt.command == "table5") table5(opt, file, out);
    else if (opt.command == "exhaustive") exhaustive(opt, file, out);
    else throw ValidationError("unknown command '" + opt.command + "'");
    out.finish();
    return kOk;
  } catch (const BudgetExceeded& e) {
    write_error(opt, {{"error", "budget"},
                      {"message", e.what()},
                      {"exit_code", kBudget},
                      {"candidate_count", e.full_count()},
                      {"restricted_count", e.restricted_count()}});
    return kBudget;
  } catch (const Error& e) {
    write_error(opt, {{"error", kind_name(e.kind())}, {"message", e.what()}, {"exit_code", exit_code(e.kind())}});
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    write_error(opt, {{"error", "internal"}, {"message", e.what()}, {"exit_code", 1}});
    return 1;
  }
}

}  // namespace crancache::cli
