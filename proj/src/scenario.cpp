#include "dsir/scenario.hpp"

#include "dsir/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dsir {
namespace {

NamedPreset lags(std::string name, double eta, double tau, double delta)
{
    NamedPreset p;
    p.name = std::move(name);
    p.values.eta = eta;
    p.values.tau = tau;
    p.values.delta = delta;
    return p;
}

NamedPreset rates(std::string name, std::optional<double> r, std::optional<double> c)
{
    NamedPreset p;
    p.name = std::move(name);
    p.values.r = r;
    p.values.c = c;
    return p;
}

void require_positive_finite(double u, const std::string& field)
{
    if (!std::isfinite(u) || u <= 0.0)
        throw ValidationError(field, "must be finite and > 0");
}

void validate(const Overrides& o, const std::string& field)
{
    auto nonneg = [&](const std::optional<double>& u, const char* key) {
        if (u && (!std::isfinite(*u) || *u < 0.0))
            throw ValidationError(field + "." + key, "must be finite and >= 0");
    };
    nonneg(o.eta, "eta");
    nonneg(o.tau, "tau");
    nonneg(o.delta, "delta");
    nonneg(o.r, "r");
    nonneg(o.c, "c");
    if (o.t_end)
        require_positive_finite(*o.t_end, field + ".t_end");
    if (o.output_step)
        require_positive_finite(*o.output_step, field + ".output_step");
}

Scenario tamilnadu()
{
    Scenario s;
    s.name = "tamilnadu";
    s.description = "Tamil Nadu COVID-19 rates; f = xy, v = x, p = y";
    s.params = {5.0, 0.0012, 0.0109, 0.065, 0.0012, 0.1087, 0.0006, 0.0017};
    s.functions.incidence = IncidenceSpec::mass_action();
    s.delays = {5.0, 1.5, 1.2};
    s.initial = {300.0, 35.0, 51.0};
    s.t_end = 500.0;
    // Neighbourhood of the full disease-free point (x* = 65.876).
    s.lipschitz_box = {65.7, 66.05, 0.001, 1.0};
    s.presets = {lags("fig2", 5.0, 1.5, 1.2),
                 lags("fig3", 7.5, 1.9, 5.0),
                 lags("fig4", 9.0, 6.0, 9.0),
                 rates("fig5", 0.1087, 0.0109),
                 rates("fig6", 0.002087, 0.00109),
                 rates("fig7", 0.187, 0.9)};
    s.published = {0.8344, {13.6841}, {124.2974}, {0.050}};
    return s;
}

Scenario india()
{
    Scenario s;
    s.name = "india";
    s.description = "India COVID-19 rates; f = xy/(1+y), v = x, p = y/(1+y)";
    s.params = {0.00004893, 0.4, 0.02, 0.00001992, 0.32, 0.0686, 0.00002021, 0.00017};
    s.functions.incidence = IncidenceSpec::saturated_in_y(1.0);
    s.functions.treatment.kind = ResponseKind::saturating;
    s.delays = {0.5, 0.5, 0.5};
    s.initial = {0.994, 0.0003813, 0.005569};
    s.t_end = 1000.0;
    s.lipschitz_box = {0.0023, 0.0026, 0.00001, 0.0001};
    s.presets = {lags("fig14", 0.5, 0.5, 0.5),
                 lags("fig15", 0.5, 5.0, 7.0),
                 lags("fig16", 2.0, 6.0, 15.0),
                 rates("fig17", 0.0686, 0.02),
                 rates("fig18", 0.1, 0.02),
                 rates("fig19", 0.0686, 0.0514)};
    s.published = {11.4545, {11.9066}, {0.6252}, {3.0016}};
    return s;
}

Scenario usa()
{
    Scenario s;
    s.name = "usa";
    s.description = "USA COVID-19 rates; f = xy/(1+x), v = x, p = y/(1+y)";
    s.params = {0.000031785, 0.5, 0.01, 0.00002377, 0.462, 0.0686, 0.00002585, 0.00017};
    s.functions.incidence = IncidenceSpec::saturated_in_x(1.0);
    s.functions.treatment.kind = ResponseKind::saturating;
    s.delays = {0.5, 0.5, 0.5};
    s.initial = {0.97286, 0.00905, 0.01809};
    s.t_end = 1000.0;
    s.lipschitz_box = {0.00315, 0.0032, 0.00001, 0.0001};
    s.presets = {lags("fig8", 0.5, 0.5, 0.5),
                 lags("fig9", 0.7, 7.0, 10.0),
                 lags("fig10", 0.8, 10.0, 12.0),
                 rates("fig11", 0.0686, 0.01),
                 rates("fig12", 0.0686, 0.0),
                 rates("fig13", 0.0, 0.01)};
    // The published vaccination-lag bound is printed as "0.8.2307"; both readings kept.
    s.published = {3.8517, {0.82307, 8.2307}, {0.1646}, {1.0446}};
    return s;
}

} // namespace

std::string_view to_string(DfeMode m)
{
    return m == DfeMode::full_dfe ? "full_dfe" : "paper_compat";
}

std::string_view to_string(FormulaMode m)
{
    return m == FormulaMode::derivation ? "derivation" : "strict_paper";
}

DfeMode parse_dfe_mode(std::string_view s)
{
    if (s == "full_dfe")
        return DfeMode::full_dfe;
    if (s == "paper_compat")
        return DfeMode::paper_compat;
    throw ValidationError("dfe_mode", "expected full_dfe or paper_compat, got '" + std::string(s) + "'");
}

FormulaMode parse_formula_mode(std::string_view s)
{
    if (s == "derivation")
        return FormulaMode::derivation;
    if (s == "strict_paper")
        return FormulaMode::strict_paper;
    throw ValidationError("formula_mode",
                          "expected derivation or strict_paper, got '" + std::string(s) + "'");
}

dde::History Scenario::effective_history() const
{
    return history ? *history : dde::History::constant(initial.to_vector());
}

const NamedPreset* Scenario::find_preset(std::string_view preset) const
{
    for (const auto& p : presets)
        if (p.name == preset)
            return &p;
    return nullptr;
}

void validate(const Scenario& s)
{
    if (s.name.empty())
        throw ValidationError("name", "must not be empty");
    validate(s.params);
    validate(s.functions.incidence);
    validate(s.functions.vaccination, s.allow_constant_functions);
    validate(s.functions.treatment, s.allow_constant_functions);
    validate(s.delays);
    for (double u : {s.initial.x, s.initial.y, s.initial.z})
        if (!std::isfinite(u))
            throw ValidationError("initial", "components must be finite");
    if (s.history) {
        if (s.history->dimension() != 3)
            throw ValidationError("history", "states must have three components");
        if (!s.history->is_constant()) {
            const double needed = -std::max({s.delays.vaccination, s.delays.incidence,
                                             s.delays.treatment});
            if (s.history->times().front() > needed || s.history->times().back() < 0.0)
                throw ValidationError("history", "table must cover [-max lag, 0]");
        }
    }
    require_positive_finite(s.t_end, "t_end");
    require_positive_finite(s.output_step, "output_step");
    require_positive_finite(s.integrator.h, "integrator.h");
    if (s.integrator.breakpoint_depth < 0 || s.integrator.breakpoint_depth > 5)
        throw ValidationError("integrator.breakpoint_depth", "must be in 0..5");
    if (s.integrator.max_steps == 0)
        throw ValidationError("integrator.max_steps", "must be > 0");
    validate(s.lipschitz_box);
    for (const auto& p : s.presets) {
        if (p.name.empty())
            throw ValidationError("presets", "preset name must not be empty");
        validate(p.values, "presets." + p.name);
    }
}

Scenario apply(Scenario base, const Overrides& o)
{
    validate(o, "overrides");
    if (o.eta)
        base.delays.vaccination = *o.eta;
    if (o.tau)
        base.delays.incidence = *o.tau;
    if (o.delta)
        base.delays.treatment = *o.delta;
    if (o.r)
        base.params.treatment_rate = *o.r;
    if (o.c)
        base.params.vaccination_rate = *o.c;
    if (o.t_end)
        base.t_end = *o.t_end;
    if (o.output_step)
        base.output_step = *o.output_step;
    validate(base);
    return base;
}

std::vector<Scenario> builtin_scenarios()
{
    return {tamilnadu(), india(), usa()};
}

Scenario builtin_scenario(std::string_view name)
{
    for (auto& s : builtin_scenarios())
        if (s.name == name)
            return s;
    throw ValidationError("scenario", "unknown builtin '" + std::string(name) +
                                          "' (expected tamilnadu, india or usa)");
}

} // namespace dsir
