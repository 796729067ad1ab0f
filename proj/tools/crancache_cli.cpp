#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using crancache::cli::Options;
  CLI::App app{"Tradeoff cache placement for Cloud-RAN: analytics, optimizers and simulation"};
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  std::string eta, quadrature;
  std::size_t draws = 0;
  double budget = 0.0;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"validate-analytics", "analytic vs simulated received-SNR CDF"},
      {"cell-metrics", "MPC and LB-LCD outage and fronthaul vs threshold and skewness"},
      {"pareto", "outage/fronthaul pairs of every placement, nondominated set flagged"},
      {"sweep-eta", "objective vs eta for GA, mode selection and the baselines"},
      {"ga-run", "single GA optimization with per-generation fitness"},
      {"table5", "optimal placements over the eta grid"},
      {"exhaustive", "exact optimum by enumeration over the eta grid"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", opt.scenario, "scenario file or preset name")->required();
    sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "overrides ga.seed and sim.seed");
    sub->add_option("--eta", eta, "list (0.2,0.4) or range (0:0.1:1)");
    sub->add_option("--threads", opt.threads, "worker cap, 0 = hardware concurrency");
    sub->add_option("--quadrature", quadrature, "Simpson subdivisions UxV, e.g. 6x6");
    sub->add_option("--draws", draws, "Monte-Carlo or baseline sample count");
    sub->add_option("--budget", budget, "exhaustive enumeration cap");
    sub->add_flag("--full-rows", opt.full_rows, "enumerate all L rows, not just the first L'");
    sub->callback([&, sub] {
      opt.command = sub->get_name();
      if (sub->count("--seed")) opt.seed = seed;
      if (sub->count("--eta")) opt.eta = eta;
      if (sub->count("--quadrature")) opt.quadrature = quadrature;
      if (sub->count("--draws")) opt.draws = draws;
      if (sub->count("--budget")) opt.budget = budget;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : crancache::cli::kValidation;
  }
  return crancache::cli::run(opt);
}
