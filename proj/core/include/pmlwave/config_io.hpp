#pragma once

#include "pmlwave/config.hpp"

#include <string>

namespace pmlwave {

/// Parse a JSON config file into a validated SimulationConfig.
/// The schema is strict: a `schema_version` key is required, unknown keys
/// are rejected (each named), missing required keys are listed, and all
/// cross-field constraints of validate_config apply. A `preset` key loads
/// a built-in scenario; the remaining keys override its fields.
SimulationConfig parse_config(const std::string& path);

/// Same, from an in-memory JSON string (used by tests and --preset flows).
SimulationConfig parse_config_text(const std::string& text);

/// Serialize (for snapshot sidecars and debugging).
std::string config_to_json(const SimulationConfig& cfg);

} // namespace pmlwave
