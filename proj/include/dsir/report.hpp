#pragma once

#include "dsir/analysis.hpp"

#include <string>

namespace dsir {

inline constexpr int report_format_version = 1;

/// JSON rendering of a StabilityReport; layout documented in docs/report.schema.json.
/// Keys are emitted in a fixed order. Infinite values are written as the string "inf".
std::string render_report(const StabilityReport& rep, const Scenario& scenario);

} // namespace dsir
