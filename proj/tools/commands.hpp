#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crancache/scenario_io.hpp"

namespace crancache::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kBudget = 3, kNumerical = 4 };

struct Options {
  std::string command;
  std::string scenario;
  std::filesystem::path out = "results";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> eta;
  unsigned threads = 0;
  std::optional<std::string> quadrature;
  std::optional<std::size_t> draws;
  std::optional<double> budget;
  bool full_rows = false;
};

/// Parses "0.1,0.5" or "start:step:stop" into a list of weights in [0, 1].
std::vector<double> parse_eta(const std::string& text);

/// Resolves a path or a preset name ("fig6_9") to a scenario file.
std::filesystem::path resolve_scenario(const std::string& name);

int run(const Options& options);

}  // namespace crancache::cli
