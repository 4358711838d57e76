#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "nonloc/config.hpp"
#include "nonloc/field.hpp"

namespace nonloc {

/// Command-line overrides of the output section.
struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<bool> dump_fields;
  std::optional<long> sample_every;
};

struct RunResult {
  nlohmann::ordered_json summary;
  std::string out_dir;
};

/// Builds the initial state described by cfg.initial, normalised.
ComplexField initial_state(const ScenarioConfig& cfg);

/// Evolves the scenario and writes summary.json, run_meta.json and (optionally)
/// field CSVs under the output directory.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOverrides& overrides = {});

/// In-memory run without touching the disk: returns the summary only.
nlohmann::ordered_json simulate_summary(const ScenarioConfig& cfg, long sample_every);

}  // namespace nonloc
