#include "dsir/analysis.hpp"

#include "dsir/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace dsir {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

using Vec3 = std::array<double, 3>;

Vec3 residual_vector(const ModelParams& k, const ModelFunctions& fns, const State& s)
{
    const double f = evaluate_incidence(fns.incidence, s.x, s.y);
    const double v = evaluate_vaccination(fns.vaccination, s.x);
    const double p = evaluate_treatment(fns.treatment, s.y);
    return {k.inflow - k.contact_rate * f - k.death_rate * s.x - k.vaccination_rate * v +
                k.immunity_loss_rate * s.z,
            k.conversion_rate * f - k.treatment_rate * p - k.infected_death_rate * s.y,
            k.treatment_rate * p - k.immunity_loss_rate * s.z};
}

double max_abs(const Vec3& v)
{
    double m = 0.0;
    for (double u : v) {
        if (!std::isfinite(u))
            return inf;
        m = std::max(m, std::abs(u));
    }
    return m;
}

bool finite(const State& s)
{
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z);
}

// Residual that maps evaluation failures (non-finite arguments) to +inf.
double safe_residual(const ModelParams& k, const ModelFunctions& fns, const State& s)
{
    if (!finite(s))
        return inf;
    try {
        return max_abs(residual_vector(k, fns, s));
    } catch (const DomainError&) {
        return inf;
    }
}

double sum_squares(const Vec3& v)
{
    return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
}

double safe_merit(const ModelParams& k, const ModelFunctions& fns, const State& s)
{
    if (!finite(s))
        return inf;
    try {
        const double m = sum_squares(residual_vector(k, fns, s));
        return std::isfinite(m) ? m : inf;
    } catch (const DomainError&) {
        return inf;
    }
}

// Gaussian elimination with partial pivoting; false when singular.
bool solve3(std::array<Vec3, 3> m, Vec3 rhs, Vec3& out)
{
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c]))
                piv = r;
        if (m[piv][c] == 0.0 || !std::isfinite(m[piv][c]))
            return false;
        std::swap(m[c], m[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (int r = c + 1; r < 3; ++r) {
            const double f = m[r][c] / m[c][c];
            for (int j = c; j < 3; ++j)
                m[r][j] -= f * m[c][j];
            rhs[r] -= f * rhs[c];
        }
    }
    for (int c = 2; c >= 0; --c) {
        double acc = rhs[c];
        for (int j = c + 1; j < 3; ++j)
            acc -= m[c][j] * out[j];
        out[c] = acc / m[c][c];
    }
    return std::all_of(out.begin(), out.end(), [](double u) { return std::isfinite(u); });
}

double ratio_min(std::initializer_list<std::pair<double, double>> terms)
{
    double m = inf;
    for (const auto& [num, den] : terms)
        if (den > 0.0)
            m = std::min(m, num / den);
    return m;
}

bool near_any(double value, const std::vector<double>& candidates, double rel)
{
    return std::any_of(candidates.begin(), candidates.end(), [&](double c) {
        return std::abs(value - c) <= rel * std::abs(c);
    });
}

} // namespace

double equilibrium_residual(const ModelParams& k, const ModelFunctions& fns, const State& s)
{
    return max_abs(residual_vector(k, fns, s));
}

Equilibrium disease_free_equilibrium(const ModelParams& k, const VaccinationSpec& v, DfeMode mode)
{
    if (!(k.death_rate > 0.0))
        throw DomainError("disease-free equilibrium needs death_rate > 0");
    Equilibrium e;
    e.kind = EquilibriumKind::disease_free;
    const double hi0 = k.inflow / k.death_rate;
    if (mode == DfeMode::paper_compat || k.inflow == 0.0) {
        e.point = {hi0, 0.0, 0.0};
        return e;
    }
    auto g = [&](double x) {
        return k.inflow - k.death_rate * x - k.vaccination_rate * evaluate_vaccination(v, x);
    };
    double lo = 0.0;
    double hi = hi0;
    if (g(lo) < 0.0 || g(hi) > 0.0)
        throw DomainError("disease-free equation has no sign change on [0, a/d]");
    int it = 0;
    while (hi - lo > 1e-12 * hi && it < 200) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
        ++it;
    }
    e.point = {0.5 * (lo + hi), 0.0, 0.0};
    e.iterations = it;
    e.residual = std::abs(g(e.point.x));
    return e;
}

State equilibrium_map(const ModelParams& k, const ModelFunctions& fns, const State& s)
{
    const double f = evaluate_incidence(fns.incidence, s.x, s.y);
    const double v = evaluate_vaccination(fns.vaccination, s.x);
    const double p = evaluate_treatment(fns.treatment, s.y);
    return {(k.inflow - k.contact_rate * f - k.vaccination_rate * v + k.immunity_loss_rate * s.z) /
                k.death_rate,
            (k.conversion_rate * f - k.treatment_rate * p) / k.infected_death_rate,
            k.treatment_rate * p / k.immunity_loss_rate};
}

FixedPointResult fixed_point_iterate(const ModelParams& k, const ModelFunctions& fns, State init,
                                     double damping, int max_iter, double tol)
{
    FixedPointResult out;
    out.point = init;
    out.residual = safe_residual(k, fns, init);
    while (out.residual > tol && out.iterations < max_iter) {
        State next;
        try {
            const State m = equilibrium_map(k, fns, out.point);
            next = {(1.0 - damping) * out.point.x + damping * m.x,
                    (1.0 - damping) * out.point.y + damping * m.y,
                    (1.0 - damping) * out.point.z + damping * m.z};
        } catch (const DomainError&) {
            break;
        }
        ++out.iterations;
        if (!finite(next))
            break;
        out.point = next;
        out.residual = safe_residual(k, fns, next);
    }
    out.converged = out.residual <= tol;
    return out;
}

FixedPointResult newton_solve(const ModelParams& k, const ModelFunctions& fns, State init,
                              int max_iter, double tol)
{
    FixedPointResult out;
    out.point = init;
    out.residual = safe_residual(k, fns, init);
    if (!std::isfinite(out.residual))
        return out;

    auto as_array = [](const State& s) { return Vec3{s.x, s.y, s.z}; };
    auto as_state = [](const Vec3& a) { return State{a[0], a[1], a[2]}; };

    while (out.residual > tol && out.iterations < max_iter) {
        ++out.iterations;
        const Vec3 xv = as_array(out.point);
        Vec3 e;
        std::array<Vec3, 3> jac{};
        try {
            e = residual_vector(k, fns, out.point);
            for (int j = 0; j < 3; ++j) {
                const double h = 1e-7 * std::max(1.0, std::abs(xv[j]));
                Vec3 up = xv, dn = xv;
                up[j] += h;
                dn[j] -= h;
                const Vec3 eu = residual_vector(k, fns, as_state(up));
                const Vec3 ed = residual_vector(k, fns, as_state(dn));
                for (int i = 0; i < 3; ++i)
                    jac[i][j] = (eu[i] - ed[i]) / (2.0 * h);
            }
        } catch (const DomainError&) {
            break;
        }
        Vec3 step{};
        if (!solve3(jac, {-e[0], -e[1], -e[2]}, step))
            break;

        // Backtrack on the smooth merit |e|^2; the max norm can stall at its kinks.
        const double merit = sum_squares(e);
        double lambda = 1.0;
        State trial;
        double trial_merit = inf;
        for (int bt = 0; bt < 60; ++bt) {
            trial = as_state({xv[0] + lambda * step[0], xv[1] + lambda * step[1],
                              xv[2] + lambda * step[2]});
            trial_merit = safe_merit(k, fns, trial);
            if (trial_merit <= (1.0 - 1e-4 * lambda) * merit)
                break;
            lambda *= 0.5;
        }
        if (!(trial_merit < merit))
            break; // no descent along the Newton direction
        out.point = trial;
        out.residual = safe_residual(k, fns, trial);
    }
    out.converged = out.residual <= tol;
    return out;
}

EndemicResult endemic_equilibrium(const ModelParams& k, const ModelFunctions& fns,
                                  const State& init, double tol)
{
    constexpr int fixed_point_steps = 200;
    constexpr int total_steps = 1000;

    EndemicResult out;
    const FixedPointResult fp = fixed_point_iterate(k, fns, init, 0.5, fixed_point_steps, tol);
    FixedPointResult found = fp;
    out.method = "fixed_point";
    if (!fp.converged) {
        const State start = std::isfinite(fp.residual) && fp.residual < safe_residual(k, fns, init)
                                ? fp.point
                                : init;
        const FixedPointResult nw =
            newton_solve(k, fns, start, total_steps - fp.iterations, tol);
        found = nw;
        found.iterations += fp.iterations;
        out.method = "newton";
        if (!nw.converged) {
            const double last = std::min(fp.residual, nw.residual);
            throw AnalysisNonConvergence(last, "endemic equilibrium solver did not converge in " +
                                                   std::to_string(found.iterations) +
                                                   " iterations (residual " +
                                                   std::to_string(last) + ")");
        }
    }
    out.converged_point = found.point;
    out.residual = found.residual;
    out.iterations = found.iterations;

    // Components at rounding level relative to the point count as zero.
    const State& s = found.point;
    const double scale = std::max({std::abs(s.x), std::abs(s.y), std::abs(s.z)});
    const double floor = 1e-8 * scale;
    if (s.x > floor && s.y > floor && s.z > floor) {
        Equilibrium e;
        e.kind = EquilibriumKind::endemic;
        e.point = s;
        e.residual = found.residual;
        e.iterations = found.iterations;
        out.equilibrium = e;
    }
    return out;
}

ContractionConstants contraction_constants(const ModelParams& k, const LipschitzBounds& L)
{
    if (k.death_rate == 0.0 || k.infected_death_rate == 0.0 || k.immunity_loss_rate == 0.0)
        throw DomainError("contraction constants need death_rate, infected_death_rate and "
                          "immunity_loss_rate nonzero");
    const double b = k.contact_rate, b1 = k.conversion_rate, c = k.vaccination_rate;
    const double d = k.death_rate, d1 = k.infected_death_rate, r = k.treatment_rate;
    const double alpha = k.immunity_loss_rate;
    ContractionConstants cc;
    cc.A = b1 * L.incidence_dx_max / d1 - b * L.incidence_dx_max / d - c * L.vaccination_min / d;
    cc.B = b1 * L.incidence_dy_max / d1 - b * L.incidence_dy_max / d +
           r * L.treatment_max / alpha - r * L.treatment_max / d1;
    cc.C = alpha / d;
    cc.A_bar = std::max({cc.A, cc.B, cc.C});
    return cc;
}

R0Result basic_reproduction_number(const ModelParams& k, const IncidenceSpec& f,
                                   const TreatmentSpec& p, const Equilibrium& dfe, DfeMode mode)
{
    R0Result out;
    out.mode = mode;
    out.x_star_used = dfe.point.x;
    out.f_y_at_dfe = partial(f, Axis::y, dfe.point.x, 0.0);
    out.p_prime_0 = slope(p, 0.0);
    const double den = k.treatment_rate * out.p_prime_0 + k.infected_death_rate;
    if (den == 0.0)
        throw DomainError("reproduction number undefined: r*p'(0) + d1 = 0");
    out.r0 = k.conversion_rate * out.f_y_at_dfe / den;
    return out;
}

bool CharacteristicFactor::stable() const
{
    if (rightmost_real_root)
        return *rightmost_real_root < 0.0;
    return A_coef + std::abs(B_coef) < 0.0;
}

CharacteristicFactor rightmost_real_root(double A, double B, double T)
{
    CharacteristicFactor out{A, B, T, std::nullopt, RootMethod::none_found};
    if (T == 0.0 || B == 0.0) {
        out.rightmost_real_root = A + B;
        out.method = RootMethod::closed_form_sign;
        return out;
    }
    auto g = [&](double lambda) { return lambda - A - B * std::exp(-lambda * T); };

    // g is increasing for B > 0. For B < 0 it is convex with its minimum at
    // ln(|B| T)/T; roots exist only when that minimum is <= 0, and the rightmost
    // one lies between the minimum and A.
    double lo = 0.0;
    double hi = 0.0;
    if (B > 0.0) {
        lo = A; // g(A) = -B exp(-A T) < 0
        double width = std::max(1.0, std::abs(A));
        hi = A + width;
        while (g(hi) < 0.0) {
            width *= 2.0;
            hi = A + width;
        }
    } else {
        const double lm = std::log(-B * T) / T;
        if (g(lm) > 0.0)
            return out;
        lo = lm;
        hi = A;
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    out.rightmost_real_root = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
    out.method = RootMethod::bisection;
    return out;
}

LocalVerdict local_stability_dfe(const ModelParams& k, const ModelFunctions& fns,
                                 const Equilibrium& dfe, const R0Result& r0, const DelaySpec& lag)
{
    const double xs = dfe.point.x;
    const double fx = partial(fns.incidence, Axis::x, xs, 0.0);
    const double fy = partial(fns.incidence, Axis::y, xs, 0.0);
    const double vp = slope(fns.vaccination, xs);
    const double pp = slope(fns.treatment, 0.0);

    LocalVerdict out;
    out.factors = {
        {"susceptible", rightmost_real_root(-k.contact_rate * fx - k.death_rate,
                                            -k.vaccination_rate * vp, lag.vaccination)},
        {"infected",
         rightmost_real_root(k.conversion_rate * fy - k.treatment_rate * pp - k.infected_death_rate,
                             k.conversion_rate * fx, lag.incidence)},
        {"recovered",
         rightmost_real_root(-k.immunity_loss_rate, k.treatment_rate * pp, lag.treatment)},
    };
    const double ratio = k.immunity_loss_rate > 0.0 ? k.treatment_rate * pp / k.immunity_loss_rate
                                                    : inf;
    out.conditions = {{"r0", r0.r0, "< 1", r0.r0 < 1.0},
                      {"treatment_over_immunity_loss", ratio, "< 1", ratio < 1.0}};

    if (r0.r0 > 1.0) {
        out.verdict = Stability::unstable;
        return out;
    }
    const bool all_stable = std::all_of(out.factors.begin(), out.factors.end(),
                                        [](const NamedFactor& f) { return f.factor.stable(); });
    if (all_stable) {
        out.verdict = Stability::stable;
        return out;
    }
    out.verdict = Stability::inconclusive;
    if (!out.factors[2].factor.stable())
        out.flags.emplace_back("dfe-recovered-factor-unstable");
    return out;
}

LocalVerdict local_stability_endemic(const ModelParams& k, const ModelFunctions& fns,
                                     const Equilibrium& ee, const DelaySpec& lag)
{
    const State& s = ee.point;
    const double fx = partial(fns.incidence, Axis::x, s.x, s.y);
    const double fy = partial(fns.incidence, Axis::y, s.x, s.y);
    const double vp = slope(fns.vaccination, s.x);
    const double pp = slope(fns.treatment, s.y);

    LocalVerdict out;
    const double den = k.treatment_rate * pp + k.infected_death_rate;
    const double first = den > 0.0 ? k.conversion_rate * (fy + fx) / den : inf;
    const double second = k.immunity_loss_rate > 0.0
                              ? k.treatment_rate * pp / k.immunity_loss_rate
                              : inf;
    out.conditions = {{"incidence_over_removal", first, "< 1", first < 1.0},
                      {"treatment_over_immunity_loss", second, "< 1", second < 1.0}};
    out.factors = {
        {"susceptible", rightmost_real_root(-k.contact_rate * fx - k.death_rate,
                                            -k.vaccination_rate * vp, lag.vaccination)},
        {"infected",
         rightmost_real_root(k.conversion_rate * fy - k.treatment_rate * pp - k.infected_death_rate,
                             k.conversion_rate * fx, lag.incidence)},
        {"recovered",
         rightmost_real_root(-k.immunity_loss_rate, k.treatment_rate * pp, lag.treatment)},
    };
    out.verdict = out.conditions[0].holds && out.conditions[1].holds ? Stability::stable
                                                                     : Stability::inconclusive;
    return out;
}

GlobalVerdict global_delay_independent(const ModelParams& k, const LipschitzBounds& L,
                                       FormulaMode mode)
{
    const double b = k.contact_rate, b1 = k.conversion_rate, c = k.vaccination_rate;
    const double r = k.treatment_rate;
    GlobalVerdict g;
    g.mode = mode;
    g.x_condition = b * L.incidence_dx_min - b1 * L.incidence_dx_max + k.death_rate +
                    c * L.vaccination_min;
    const double common = b * L.incidence_dy_min - b1 * L.incidence_dy_max + r * L.treatment_min +
                          k.infected_death_rate;
    g.y_condition_derivation = common - r * L.treatment_max;
    g.y_condition_strict = common + r * L.treatment_max;
    g.holds_derivation = g.x_condition > 0.0 && g.y_condition_derivation > 0.0;
    g.holds_strict = g.x_condition > 0.0 && g.y_condition_strict > 0.0;
    return g;
}

bool DelayRanges::contains(const DelaySpec& lag) const
{
    return feasible && lag.vaccination < r_max && lag.incidence < s_max && lag.treatment < q_max;
}

void finish_ranges(DelayRanges& r)
{
    r.r_max = ratio_min({{r.A1, r.B1}, {r.A2, r.B2}});
    r.s_max = ratio_min({{r.A1, r.C1},
                         {r.A2, r.C2},
                         {r.A1 * r.B3, r.C3 * r.B1},
                         {r.A2 * r.B3, r.C3 * r.B2}});
    r.q_max = ratio_min({{r.A1, r.D1}, {r.A2, r.D2}});
    r.feasible = r.A1 > 0.0 && r.A2 > 0.0;
}

DelayRanges delay_ranges(const ModelParams& k, const LipschitzBounds& L, FormulaMode mode)
{
    const double b = k.contact_rate, b1 = k.conversion_rate, c = k.vaccination_rate;
    const double d = k.death_rate, d1 = k.infected_death_rate, r = k.treatment_rate;
    const double alpha = k.immunity_loss_rate;
    const double K1 = L.incidence_dx_min, K2 = L.incidence_dy_min;
    const double K3 = L.incidence_dx_max, K4 = L.incidence_dy_max;
    const double M1 = L.vaccination_min, M2 = L.vaccination_max;
    const double L1 = L.treatment_min, L2 = L.treatment_max;

    DelayRanges out;
    out.mode = mode;
    out.A1 = b * K1 - b1 * K3 + (mode == FormulaMode::derivation ? d : d1) + c * M1;
    out.A2 = b * K2 - b1 * K4 + r * L1 - r * L2 + d1;
    out.B1 = c * b * M1 * K1 + c * d * M1 + c * c * M1 * M2;
    out.B2 = b1 * c * M1 * K2;
    out.B3 = c * M1 * alpha;
    out.C1 = b1 * K3 * K3 * b + b1 * d * K3 + b1 * K3 * c * M2;
    out.C2 = b1 * b * K3 * K4;
    out.C3 = b1 * K3 * alpha;
    out.D1 = r * L2 * b1 * K3;
    out.D2 = r * L2 * b1 * K4 + r * r * L2 * L2 + r * L2 * d1;
    finish_ranges(out);
    return out;
}

std::string_view to_string(RootMethod m)
{
    switch (m) {
    case RootMethod::closed_form_sign:
        return "closed_form_sign";
    case RootMethod::bisection:
        return "bisection";
    case RootMethod::none_found:
        return "none_found";
    }
    return "?";
}

std::string_view to_string(Stability s)
{
    switch (s) {
    case Stability::stable:
        return "STABLE";
    case Stability::unstable:
        return "UNSTABLE";
    case Stability::inconclusive:
        return "INCONCLUSIVE";
    case Stability::not_applicable:
        return "NOT_APPLICABLE";
    }
    return "?";
}

std::string_view to_string(SectionStatus s)
{
    switch (s) {
    case SectionStatus::ok:
        return "ok";
    case SectionStatus::none:
        return "none";
    case SectionStatus::failed:
        return "failed";
    }
    return "?";
}

StabilityReport full_report(const Scenario& s)
{
    validate(s);
    const ModelParams& k = s.params;
    if (!(k.death_rate > 0.0))
        throw ValidationError("params.death_rate", "analysis needs a positive value");
    if (!(k.infected_death_rate > 0.0))
        throw ValidationError("params.infected_death_rate", "analysis needs a positive value");
    if (!(k.immunity_loss_rate > 0.0))
        throw ValidationError("params.immunity_loss_rate", "analysis needs a positive value");

    StabilityReport rep;
    rep.scenario = s.name;
    rep.lipschitz = lipschitz_bounds(s.functions.incidence, s.functions.vaccination,
                                     s.functions.treatment, s.lipschitz_box);
    for (const auto& w : rep.lipschitz.warnings)
        rep.flags.push_back("lipschitz:" + w);

    rep.dfe = disease_free_equilibrium(k, s.functions.vaccination, s.dfe_mode);
    rep.r0 = basic_reproduction_number(k, s.functions.incidence, s.functions.treatment, rep.dfe,
                                       s.dfe_mode);
    if (s.published.r0 && !near_any(rep.r0.r0, {*s.published.r0}, 1e-3))
        rep.flags.emplace_back("r0-differs-from-published");

    const State& init = s.initial;
    const double xs = std::max(rep.dfe.point.x, 1e-6);
    const State guess = init.x > 0.0 && init.y > 0.0 && init.z > 0.0
                            ? init
                            : State{xs, 1e-3 * xs, 1e-3 * xs};
    try {
        const EndemicResult ee = endemic_equilibrium(k, s.functions, guess);
        if (ee.equilibrium) {
            rep.endemic = ee.equilibrium;
            rep.endemic_status = SectionStatus::ok;
        } else {
            rep.endemic_status = SectionStatus::none;
            rep.endemic_message = "solver converged to a point with a nonpositive component";
        }
    } catch (const AnalysisNonConvergence& e) {
        rep.endemic_status = SectionStatus::failed;
        rep.endemic_message = e.what();
        rep.flags.emplace_back("endemic-solver-non-convergence");
    }

    rep.contraction = contraction_constants(k, rep.lipschitz);
    if (!rep.contraction.unique())
        rep.flags.emplace_back("contraction-condition-fails");

    rep.local_dfe = local_stability_dfe(k, s.functions, rep.dfe, rep.r0, s.delays);
    rep.flags.insert(rep.flags.end(), rep.local_dfe.flags.begin(), rep.local_dfe.flags.end());
    if (rep.endemic)
        rep.local_endemic = local_stability_endemic(k, s.functions, *rep.endemic, s.delays);

    rep.global_independent = global_delay_independent(k, rep.lipschitz, s.formula_mode);
    if (rep.global_independent.modes_disagree())
        rep.flags.emplace_back("global-formula-modes-disagree");

    rep.ranges = delay_ranges(k, rep.lipschitz, s.formula_mode);
    const FormulaMode other = s.formula_mode == FormulaMode::derivation ? FormulaMode::strict_paper
                                                                        : FormulaMode::derivation;
    if (delay_ranges(k, rep.lipschitz, other).feasible != rep.ranges.feasible)
        rep.flags.emplace_back("range-formula-modes-disagree");
    if (!rep.ranges.feasible)
        rep.flags.emplace_back("delay-ranges-infeasible");
    else if (!rep.ranges.contains(s.delays))
        rep.flags.emplace_back("delays-outside-certified-range");
    if (rep.ranges.z_coefficient(s.delays) <= 0.0)
        rep.flags.emplace_back("z-coefficient-nonpositive");

    if (!s.published.empty()) {
        const DelayRanges unit = delay_ranges(k, LipschitzBounds::unit(), FormulaMode::strict_paper);
        auto compare = [&](const char* name, double computed, double unit_value,
                           const std::vector<double>& published) {
            if (published.empty())
                return;
            PublishedComparison c{name, computed, unit_value, published,
                                  near_any(computed, published, 5e-3),
                                  near_any(unit_value, published, 5e-3)};
            rep.range_comparison.push_back(c);
        };
        compare("eta_max", rep.ranges.r_max, unit.r_max, s.published.eta_max);
        compare("tau_max", rep.ranges.s_max, unit.s_max, s.published.tau_max);
        compare("delta_max", rep.ranges.q_max, unit.q_max, s.published.delta_max);
        const bool mismatch = std::any_of(rep.range_comparison.begin(), rep.range_comparison.end(),
                                          [](const PublishedComparison& c) {
                                              return !c.matches_computed;
                                          });
        if (mismatch)
            rep.flags.emplace_back("published-range-mismatch");
    }

    const double phi0 = phi_initial(k, rep.lipschitz, s.delays, s.initial);
    rep.boundedness = boundedness_certificate(k, rep.lipschitz, phi0);
    return rep;
}

} // namespace dsir
