#pragma once

#include "dsir/dde.hpp"
#include "dsir/functions.hpp"
#include "dsir/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsir {

/// Disease-free equilibrium convention.
///   full_dfe:     solves a - d*x - c*v(x) = 0
///   paper_compat: x* = a/d, vaccination dropped (reproduces the published R0 values)
enum class DfeMode { full_dfe, paper_compat };

/// Which variant of the global-stability formulas to use where the stated
/// theorem and its derivation disagree.
///   derivation:   signs and symbols as they fall out of the Lyapunov derivative
///   strict_paper: formulas exactly as stated
enum class FormulaMode { derivation, strict_paper };

std::string_view to_string(DfeMode m);
std::string_view to_string(FormulaMode m);
DfeMode parse_dfe_mode(std::string_view s);
FormulaMode parse_formula_mode(std::string_view s);

/// Partial override of delays and control rates. Unset fields keep the base value.
struct Overrides {
    std::optional<double> eta;
    std::optional<double> tau;
    std::optional<double> delta;
    std::optional<double> r;
    std::optional<double> c;
    std::optional<double> t_end;
    std::optional<double> output_step;

    bool operator==(const Overrides&) const = default;
};

struct NamedPreset {
    std::string name;
    Overrides values;

    bool operator==(const NamedPreset&) const = default;
};

/// Values reported alongside the published parameter sets, kept for comparison only.
/// Several candidates are allowed where the published figure is ambiguous.
struct PublishedValues {
    std::optional<double> r0;
    std::vector<double> eta_max;
    std::vector<double> tau_max;
    std::vector<double> delta_max;

    bool operator==(const PublishedValues&) const = default;
    bool empty() const { return !r0 && eta_max.empty() && tau_max.empty() && delta_max.empty(); }
};

struct Scenario {
    std::string name;
    std::string description;
    ModelParams params;
    ModelFunctions functions;
    bool allow_constant_functions = false;
    DelaySpec delays;
    State initial;
    std::optional<dde::History> history; // unset: constant, equal to `initial`
    double t_end = 100.0;
    dde::IntegratorConfig integrator;
    double output_step = 1.0;
    DomainBox lipschitz_box;
    DfeMode dfe_mode = DfeMode::full_dfe;
    FormulaMode formula_mode = FormulaMode::derivation;
    std::vector<NamedPreset> presets;
    PublishedValues published;

    bool operator==(const Scenario&) const = default;

    dde::History effective_history() const;
    const NamedPreset* find_preset(std::string_view preset) const;
};

/// Throws ValidationError naming the offending field.
void validate(const Scenario& s);

/// Copy of `base` with the set fields of `o` applied, validated.
Scenario apply(Scenario base, const Overrides& o);

/// The three published COVID-19 parameter studies: "tamilnadu", "india", "usa".
std::vector<Scenario> builtin_scenarios();
/// Throws ValidationError("scenario", ...) for an unknown name.
Scenario builtin_scenario(std::string_view name);

} // namespace dsir
