#include "dsir/functions.hpp"

#include "dsir/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

namespace dsir {
namespace {

void require_finite(double u, const char* what)
{
    if (!std::isfinite(u))
        throw DomainError(std::string(what) + ": non-finite argument");
}

double response_value(ResponseKind kind, double k, double a, double u)
{
    switch (kind) {
    case ResponseKind::constant:
        return k;
    case ResponseKind::linear:
        return u;
    case ResponseKind::saturating:
        return u / (a + u);
    case ResponseKind::hyperbolic_sine:
        return std::sinh(u);
    case ResponseKind::hyperbolic_tangent:
        return std::tanh(u);
    }
    return 0.0;
}

double response_slope(ResponseKind kind, double a, double u)
{
    switch (kind) {
    case ResponseKind::constant:
        return 0.0;
    case ResponseKind::linear:
        return 1.0;
    case ResponseKind::saturating: {
        const double s = a + u;
        if (s == 0.0)
            throw DomainError("saturating slope undefined where a + u = 0");
        return a / (s * s);
    }
    case ResponseKind::hyperbolic_sine:
        return std::cosh(u);
    case ResponseKind::hyperbolic_tangent: {
        const double c = std::cosh(u);
        return 1.0 / (c * c);
    }
    }
    return 0.0;
}

void validate_response(ResponseKind kind, double k, double a, bool allow_constant,
                       const std::string& field)
{
    if (!std::isfinite(k) || k < 0.0)
        throw ValidationError(field + ".k", "must be finite and >= 0");
    if (!std::isfinite(a) || a < 0.0)
        throw ValidationError(field + ".a", "must be finite and >= 0");
    if (kind == ResponseKind::saturating && a == 0.0)
        throw ValidationError(field + ".a", "saturating kind needs a > 0 (u/(a+u) is undefined at 0)");
    if (kind == ResponseKind::constant && !allow_constant)
        throw ValidationError(field + ".kind",
                              "constant kind does not vanish at 0 and breaks the positivity "
                              "hypothesis; set allow_constant_functions to accept it");
}

// Min and max of |g| over a finite set of points, where g may throw at singular points.
template <typename Points, typename Fn>
std::pair<double, double> abs_extrema(const Points& pts, Fn&& g, const char* what)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& pt : pts) {
        double val = 0.0;
        try {
            val = std::abs(g(pt));
        } catch (const DomainError&) {
            val = std::numeric_limits<double>::infinity();
        }
        if (!std::isfinite(val))
            throw DomainError(std::string(what) + " slope is unbounded on the box");
        lo = std::min(lo, val);
        hi = std::max(hi, val);
    }
    return {lo, hi};
}

} // namespace

LipschitzBounds LipschitzBounds::unit()
{
    LipschitzBounds b;
    b.incidence_dx_min = b.incidence_dy_min = b.incidence_dx_max = b.incidence_dy_max = 1.0;
    b.vaccination_min = b.vaccination_max = 1.0;
    b.treatment_min = b.treatment_max = 1.0;
    return b;
}

double evaluate_incidence(const IncidenceSpec& f, double x, double y)
{
    require_finite(x, "incidence");
    require_finite(y, "incidence");
    switch (f.kind) {
    case IncidenceKind::mass_action:
        return x * y;
    case IncidenceKind::power:
        if (x == 0.0 || y == 0.0)
            return 0.0;
        return f.c_pow * std::pow(x, f.p_exp) * std::pow(y, f.q_exp);
    case IncidenceKind::saturated_in_x:
        return x * y / (1.0 + f.b_sat * x);
    case IncidenceKind::saturated_in_y:
        return x * y / (1.0 + f.a_sat * y);
    }
    return 0.0;
}

double evaluate_treatment(const TreatmentSpec& p, double y)
{
    require_finite(y, "treatment");
    return response_value(p.kind, p.k_const, p.a_sat, y);
}

double evaluate_vaccination(const VaccinationSpec& v, double x)
{
    require_finite(x, "vaccination");
    return response_value(v.kind, v.k_const, v.a_sat, x);
}

double partial(const IncidenceSpec& f, Axis which, double x, double y)
{
    require_finite(x, "incidence partial");
    require_finite(y, "incidence partial");
    const bool dx = which == Axis::x;
    switch (f.kind) {
    case IncidenceKind::mass_action:
        return dx ? y : x;
    case IncidenceKind::power: {
        const double own = dx ? x : y;
        const double other = dx ? y : x;
        const double e_own = dx ? f.p_exp : f.q_exp;
        const double e_other = dx ? f.q_exp : f.p_exp;
        if (own == 0.0 && e_own < 1.0)
            throw DomainError("power incidence partial is unbounded at the axis");
        const double d_own = e_own == 1.0 ? 1.0 : e_own * std::pow(own, e_own - 1.0);
        return f.c_pow * d_own * std::pow(other, e_other);
    }
    case IncidenceKind::saturated_in_x: {
        const double s = 1.0 + f.b_sat * x;
        return dx ? y / (s * s) : x / s;
    }
    case IncidenceKind::saturated_in_y: {
        const double s = 1.0 + f.a_sat * y;
        return dx ? y / s : x / (s * s);
    }
    }
    return 0.0;
}

double slope(const TreatmentSpec& p, double y)
{
    require_finite(y, "treatment slope");
    return response_slope(p.kind, p.a_sat, y);
}

double slope(const VaccinationSpec& v, double x)
{
    require_finite(x, "vaccination slope");
    return response_slope(v.kind, v.a_sat, x);
}

void validate(const IncidenceSpec& f, const std::string& field)
{
    auto nonneg = [&](double u, const char* key) {
        if (!std::isfinite(u) || u < 0.0)
            throw ValidationError(field + "." + key, "must be finite and >= 0");
    };
    switch (f.kind) {
    case IncidenceKind::mass_action:
        break;
    case IncidenceKind::power:
        nonneg(f.c_pow, "c");
        nonneg(f.p_exp, "p");
        nonneg(f.q_exp, "q");
        if (f.p_exp == 0.0)
            throw ValidationError(field + ".p", "exponent must be > 0");
        if (f.q_exp == 0.0)
            throw ValidationError(field + ".q", "exponent must be > 0");
        break;
    case IncidenceKind::saturated_in_x:
        nonneg(f.b_sat, "b");
        break;
    case IncidenceKind::saturated_in_y:
        nonneg(f.a_sat, "a");
        break;
    }
}

void validate(const TreatmentSpec& p, bool allow_constant, const std::string& field)
{
    validate_response(p.kind, p.k_const, p.a_sat, allow_constant, field);
}

void validate(const VaccinationSpec& v, bool allow_constant, const std::string& field)
{
    if (v.kind == ResponseKind::hyperbolic_tangent)
        throw ValidationError(field + ".kind", "hyperbolic_tangent is not a vaccination family");
    validate_response(v.kind, v.k_const, v.a_sat, allow_constant, field);
}

void validate(const DomainBox& box, const std::string& field)
{
    const std::array<double, 4> all{box.x_min, box.x_max, box.y_min, box.y_max};
    if (!std::all_of(all.begin(), all.end(), [](double u) { return std::isfinite(u); }))
        throw ValidationError(field, "bounds must be finite");
    if (box.x_min < 0.0 || box.y_min < 0.0)
        throw ValidationError(field, "box must lie in the nonnegative quadrant");
    if (!(box.x_min < box.x_max))
        throw ValidationError(field, "degenerate box: need x_min < x_max");
    if (!(box.y_min < box.y_max))
        throw ValidationError(field, "degenerate box: need y_min < y_max");
}

LipschitzBounds lipschitz_bounds(const IncidenceSpec& f, const VaccinationSpec& v,
                                 const TreatmentSpec& p, const DomainBox& box)
{
    try {
        validate(box);
    } catch (const ValidationError& e) {
        throw DomainError(e.what());
    }

    // Every family's partials are monotone in each coordinate separately, so the
    // extrema over the box sit on its corners (and on interval ends for v, p).
    struct Corner {
        double x, y;
    };
    const std::array<Corner, 4> corners{{{box.x_min, box.y_min},
                                         {box.x_min, box.y_max},
                                         {box.x_max, box.y_min},
                                         {box.x_max, box.y_max}}};

    LipschitzBounds out;
    std::tie(out.incidence_dx_min, out.incidence_dx_max) = abs_extrema(
        corners, [&](const Corner& c) { return partial(f, Axis::x, c.x, c.y); }, "incidence x");
    std::tie(out.incidence_dy_min, out.incidence_dy_max) = abs_extrema(
        corners, [&](const Corner& c) { return partial(f, Axis::y, c.x, c.y); }, "incidence y");
    std::tie(out.vaccination_min, out.vaccination_max) = abs_extrema(
        std::array<double, 2>{box.x_min, box.x_max}, [&](double x) { return slope(v, x); },
        "vaccination");
    std::tie(out.treatment_min, out.treatment_max) = abs_extrema(
        std::array<double, 2>{box.y_min, box.y_max}, [&](double y) { return slope(p, y); },
        "treatment");

    if (box.x_min == 0.0 || box.y_min == 0.0)
        out.warnings.emplace_back("box-touches-axis");
    if (out.incidence_dx_min == 0.0)
        out.warnings.emplace_back("zero-lower-constant:incidence_dx");
    if (out.incidence_dy_min == 0.0)
        out.warnings.emplace_back("zero-lower-constant:incidence_dy");
    if (out.vaccination_min == 0.0)
        out.warnings.emplace_back("zero-lower-constant:vaccination");
    if (out.treatment_min == 0.0)
        out.warnings.emplace_back("zero-lower-constant:treatment");
    return out;
}

std::string_view to_string(IncidenceKind k)
{
    switch (k) {
    case IncidenceKind::mass_action:
        return "mass_action";
    case IncidenceKind::power:
        return "power";
    case IncidenceKind::saturated_in_x:
        return "saturated_in_x";
    case IncidenceKind::saturated_in_y:
        return "saturated_in_y";
    }
    return "?";
}

std::string_view to_string(ResponseKind k)
{
    switch (k) {
    case ResponseKind::constant:
        return "constant";
    case ResponseKind::linear:
        return "linear";
    case ResponseKind::saturating:
        return "saturating";
    case ResponseKind::hyperbolic_sine:
        return "hyperbolic_sine";
    case ResponseKind::hyperbolic_tangent:
        return "hyperbolic_tangent";
    }
    return "?";
}

IncidenceKind parse_incidence_kind(std::string_view s)
{
    for (auto k : {IncidenceKind::mass_action, IncidenceKind::power, IncidenceKind::saturated_in_x,
                   IncidenceKind::saturated_in_y})
        if (to_string(k) == s)
            return k;
    throw ValidationError("kind", "unknown incidence kind '" + std::string(s) + "'");
}

ResponseKind parse_response_kind(std::string_view s)
{
    for (auto k : {ResponseKind::constant, ResponseKind::linear, ResponseKind::saturating,
                   ResponseKind::hyperbolic_sine, ResponseKind::hyperbolic_tangent})
        if (to_string(k) == s)
            return k;
    throw ValidationError("kind", "unknown function kind '" + std::string(s) + "'");
}

} // namespace dsir
