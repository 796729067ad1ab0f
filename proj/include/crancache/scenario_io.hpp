#pragma once

/// @file scenario_io.hpp
/// JSON scenario files. Parsing is followed by full validation; every error
/// names the offending field path, e.g. "layout.rrh[2].rho".

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "crancache/model.hpp"
#include "crancache/montecarlo.hpp"
#include "crancache/solvers.hpp"

namespace crancache {

struct DistanceSet {
  std::string tag;
  std::vector<double> distances;  ///< in units of R
};

/// Received-SNR CDF experiment: fixed distance sets, log-spaced gamma grid.
struct CdfSetup {
  std::vector<DistanceSet> distance_sets;
  double gamma_db_min = -10.0;
  double gamma_db_max = 20.0;
  std::size_t points = 20;
};

/// Parameter sweeps for cell-metrics.
struct SweepSetup {
  std::vector<double> gamma_th_db;
  std::vector<double> beta;
};

struct ScenarioFile {
  explicit ScenarioFile(Scenario s) : scenario(std::move(s)) {}

  std::string name;
  Scenario scenario;
  double theta_offset = 0.0;
  GaConfig ga;
  SimConfig sim;
  std::vector<double> eta_grid;
  CdfSetup cdf;
  SweepSetup sweep;
};

/// Eleven points 0, 0.1, ..., 1.
std::vector<double> default_eta_grid();

ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);
/// Full resolved configuration as pretty JSON; parse_scenario round-trips it.
std::string scenario_to_json(const ScenarioFile& file, int indent = 2);

}  // namespace crancache
