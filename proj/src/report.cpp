#include "dsir/report.hpp"

#include <json.hpp>

#include <cmath>

namespace dsir {
namespace {

using ordered = nlohmann::ordered_json;

ordered num(double u)
{
    if (std::isnan(u))
        return nullptr;
    if (std::isinf(u))
        return u > 0 ? "inf" : "-inf";
    return u;
}

ordered state_json(const State& s)
{
    return {{"x", num(s.x)}, {"y", num(s.y)}, {"z", num(s.z)}};
}

ordered verdict_json(const LocalVerdict& v)
{
    ordered o;
    o["verdict"] = to_string(v.verdict);
    ordered conds = ordered::array();
    for (const auto& c : v.conditions)
        conds.push_back({{"name", c.name},
                         {"value", num(c.value)},
                         {"relation", c.relation},
                         {"holds", c.holds}});
    o["conditions"] = conds;
    ordered factors = ordered::array();
    for (const auto& nf : v.factors) {
        const auto& f = nf.factor;
        factors.push_back({{"name", nf.name},
                           {"A", num(f.A_coef)},
                           {"B", num(f.B_coef)},
                           {"T", num(f.T_lag)},
                           {"root", f.rightmost_real_root ? num(*f.rightmost_real_root) : ordered()},
                           {"method", to_string(f.method)},
                           {"stable", f.stable()}});
    }
    o["factors"] = factors;
    return o;
}

} // namespace

std::string render_report(const StabilityReport& rep, const Scenario& s)
{
    ordered o;
    o["format_version"] = report_format_version;
    o["scenario"] = rep.scenario;

    o["r0"] = {{"value", num(rep.r0.r0)},
               {"mode", to_string(rep.r0.mode)},
               {"x_star_used", num(rep.r0.x_star_used)},
               {"f_y_at_dfe", num(rep.r0.f_y_at_dfe)},
               {"p_prime_0", num(rep.r0.p_prime_0)},
               {"published", s.published.r0 ? num(*s.published.r0) : ordered()}};

    ordered dfe = state_json(rep.dfe.point);
    dfe["residual"] = num(rep.dfe.residual);
    dfe["iterations"] = rep.dfe.iterations;
    dfe["mode"] = to_string(s.dfe_mode);
    o["dfe"] = dfe;

    ordered ee;
    ee["status"] = to_string(rep.endemic_status);
    if (rep.endemic) {
        ee["point"] = state_json(rep.endemic->point);
        ee["residual"] = num(rep.endemic->residual);
        ee["iterations"] = rep.endemic->iterations;
    } else {
        ee["point"] = nullptr;
        ee["residual"] = nullptr;
        ee["iterations"] = nullptr;
    }
    ee["message"] = rep.endemic_message;
    o["endemic"] = ee;

    o["contraction"] = {{"A", num(rep.contraction.A)},
                        {"B", num(rep.contraction.B)},
                        {"C", num(rep.contraction.C)},
                        {"A_bar", num(rep.contraction.A_bar)},
                        {"unique", rep.contraction.unique()}};

    o["local_dfe"] = verdict_json(rep.local_dfe);
    o["local_endemic"] = verdict_json(rep.local_endemic);

    const GlobalVerdict& g = rep.global_independent;
    o["global_independent"] = {{"mode", to_string(g.mode)},
                               {"x_condition", num(g.x_condition)},
                               {"y_condition_derivation", num(g.y_condition_derivation)},
                               {"y_condition_strict", num(g.y_condition_strict)},
                               {"holds_derivation", g.holds_derivation},
                               {"holds_strict", g.holds_strict},
                               {"holds", g.holds()}};

    const DelayRanges& r = rep.ranges;
    ordered dr;
    dr["mode"] = to_string(r.mode);
    dr["A1"] = num(r.A1);
    dr["A2"] = num(r.A2);
    dr["B1"] = num(r.B1);
    dr["B2"] = num(r.B2);
    dr["B3"] = num(r.B3);
    dr["C1"] = num(r.C1);
    dr["C2"] = num(r.C2);
    dr["C3"] = num(r.C3);
    dr["D1"] = num(r.D1);
    dr["D2"] = num(r.D2);
    dr["eta_max"] = num(r.r_max);
    dr["tau_max"] = num(r.s_max);
    dr["delta_max"] = num(r.q_max);
    dr["feasible"] = r.feasible;
    dr["z_coefficient"] = num(r.z_coefficient(s.delays));
    dr["contains_scenario_delays"] = r.contains(s.delays);
    ordered cmp = ordered::array();
    for (const auto& c : rep.range_comparison) {
        ordered pub = ordered::array();
        for (double u : c.published)
            pub.push_back(num(u));
        cmp.push_back({{"quantity", c.quantity},
                       {"computed", num(c.computed)},
                       {"computed_unit_strict", num(c.computed_unit_strict)},
                       {"published", pub},
                       {"matches_computed", c.matches_computed},
                       {"matches_unit_strict", c.matches_unit_strict}});
    }
    dr["published_comparison"] = cmp;
    o["delay_ranges"] = dr;

    o["flags"] = rep.flags;

    const LipschitzBounds& L = rep.lipschitz;
    o["lipschitz"] = {{"box",
                       {{"x_min", num(s.lipschitz_box.x_min)},
                        {"x_max", num(s.lipschitz_box.x_max)},
                        {"y_min", num(s.lipschitz_box.y_min)},
                        {"y_max", num(s.lipschitz_box.y_max)}}},
                      {"incidence_dx_min", num(L.incidence_dx_min)},
                      {"incidence_dy_min", num(L.incidence_dy_min)},
                      {"incidence_dx_max", num(L.incidence_dx_max)},
                      {"incidence_dy_max", num(L.incidence_dy_max)},
                      {"vaccination_min", num(L.vaccination_min)},
                      {"vaccination_max", num(L.vaccination_max)},
                      {"treatment_min", num(L.treatment_min)},
                      {"treatment_max", num(L.treatment_max)}};
    const BoundednessCertificate& b = rep.boundedness;
    o["boundedness"] = {{"x_rate", num(b.x_rate)},
                        {"y_rate", num(b.y_rate)},
                        {"gamma", num(b.gamma)},
                        {"bound", num(b.bound)},
                        {"holds", b.holds}};
    return o.dump(2) + "\n";
}

} // namespace dsir
