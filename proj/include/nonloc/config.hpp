#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonloc/dynamics.hpp"
#include "nonloc/grid.hpp"

namespace nonloc {

enum class InitialKind { gaussian_packet, lz_eigenstate, file };

struct InitialConfig {
  InitialKind kind = InitialKind::gaussian_packet;
  Point center{0.0, 0.0, 0.0};
  Point momentum{0.0, 0.0, 0.0};
  double width = 1.0;
  int m = 0;
  bool relax = true;
  double relax_dt = 4e-3;
  std::string path;  // resolved against the config file's directory
};

struct OutputConfig {
  long sample_every = 1;
  bool dump_fields = false;
  std::string out_dir = "out";
};

struct ScenarioConfig {
  std::string name = "scenario";
  Grid grid = Grid::cube(1, 64, 10.0);
  HamiltonianSpec hamiltonian;
  /// hbar used only for the xi report; defaults to units.hbar.
  double nc_hbar = 1.0;
  PropagatorConfig propagator;
  long steps = 0;
  InitialConfig initial;
  OutputConfig output;

  /// Resolved configuration with defaults filled in.
  nlohmann::ordered_json to_json() const;
};

/// Parses and validates a YAML scenario. Collects every problem found and
/// throws ConfigError listing all of them.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_string(const std::string& text, const std::string& base_dir = ".");

}  // namespace nonloc
