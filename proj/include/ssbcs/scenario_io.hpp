#pragma once

#include "ssbcs/harness.hpp"

#include <string>

namespace ssbcs {

/// Sections: system, schedule, adversary, initial_state, run. In strict mode
/// unknown keys are errors; otherwise they are ignored.
ScenarioConfig scenario_from_json(const std::string& text, bool strict = true);
std::string scenario_to_json(const ScenarioConfig& sc);

/// Reads `path`; an empty path falls back to $SSBCS_CONFIG and then to the
/// built-in reference scenario.
ScenarioConfig load_scenario(const std::string& path, bool strict = true);

}  // namespace ssbcs
