#pragma once

#include "dsir/scenario.hpp"

#include <string>
#include <string_view>

namespace dsir {

/// Current scenario document version. See docs/config-format.md.
inline constexpr int config_format_version = 1;

/// Parses a scenario document (JSON). Throws ConfigParseError with "line L, column C"
/// for malformed text and ValidationError naming the field for unknown keys, wrong
/// types, missing required keys or broken invariants.
Scenario load_scenario(std::string_view text);

/// Reads and parses a file; I/O failures throw ConfigParseError with the path.
Scenario load_scenario_file(const std::string& path);

/// Pretty-printed document that load_scenario maps back to an equal Scenario.
/// Function parameters that do not apply to the chosen kind are not written.
std::string serialize_scenario(const Scenario& s);

} // namespace dsir
