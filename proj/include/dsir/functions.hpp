#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dsir {

// Incidence f(x, y): rate at which susceptible/infected contact produces infections.
enum class IncidenceKind {
    mass_action,    // x*y
    power,          // c * x^p * y^q
    saturated_in_x, // x*y / (1 + b*x)
    saturated_in_y, // x*y / (1 + a*y)
};

struct IncidenceSpec {
    IncidenceKind kind = IncidenceKind::mass_action;
    double c_pow = 1.0;
    double p_exp = 1.0;
    double q_exp = 1.0;
    double b_sat = 1.0;
    double a_sat = 1.0;

    static IncidenceSpec mass_action() { return {}; }
    static IncidenceSpec power(double c, double p, double q)
    {
        IncidenceSpec s;
        s.kind = IncidenceKind::power;
        s.c_pow = c;
        s.p_exp = p;
        s.q_exp = q;
        return s;
    }
    static IncidenceSpec saturated_in_x(double b)
    {
        IncidenceSpec s;
        s.kind = IncidenceKind::saturated_in_x;
        s.b_sat = b;
        return s;
    }
    static IncidenceSpec saturated_in_y(double a)
    {
        IncidenceSpec s;
        s.kind = IncidenceKind::saturated_in_y;
        s.a_sat = a;
        return s;
    }

    bool operator==(const IncidenceSpec&) const = default;
};

// Shared shape of the one-argument treatment p(y) and vaccination v(x) families.
enum class ResponseKind {
    constant,           // k
    linear,             // u
    saturating,         // u / (a + u)
    hyperbolic_sine,    // sinh(u)
    hyperbolic_tangent, // tanh(u), treatment only
};

struct TreatmentSpec {
    ResponseKind kind = ResponseKind::linear;
    double k_const = 0.0;
    double a_sat = 1.0;

    bool operator==(const TreatmentSpec&) const = default;
};

struct VaccinationSpec {
    ResponseKind kind = ResponseKind::linear;
    double k_const = 0.0;
    double a_sat = 1.0;

    bool operator==(const VaccinationSpec&) const = default;
};

enum class Axis { x, y };

/// Compact region [x_min, x_max] x [y_min, y_max] over which slope constants are taken.
struct DomainBox {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    bool operator==(const DomainBox&) const = default;
};

/// Two-sided slope constants of f, v and p over a DomainBox.
///
/// For f the lower/upper pairs bound |df/dx| and |df/dy| separately, so that
///   dx_min*|x - x'| + dy_min*|y - y'| <= |f(x,y) - f(x',y')|   (one axis at a time)
///   |f(x,y) - f(x',y')| <= dx_max*|x - x'| + dy_max*|y - y'|
/// and analogously for v and p.
struct LipschitzBounds {
    double incidence_dx_min = 0.0;
    double incidence_dy_min = 0.0;
    double incidence_dx_max = 0.0;
    double incidence_dy_max = 0.0;
    double vaccination_min = 0.0;
    double vaccination_max = 0.0;
    double treatment_min = 0.0;
    double treatment_max = 0.0;
    std::vector<std::string> warnings;

    /// Every constant equal to one.
    static LipschitzBounds unit();
};

double evaluate_incidence(const IncidenceSpec& f, double x, double y);
double evaluate_treatment(const TreatmentSpec& p, double y);
double evaluate_vaccination(const VaccinationSpec& v, double x);

/// Analytic partial derivative of f with respect to `which` at (x, y).
double partial(const IncidenceSpec& f, Axis which, double x, double y);
/// p'(y).
double slope(const TreatmentSpec& p, double y);
/// v'(x).
double slope(const VaccinationSpec& v, double x);

/// Throws ValidationError naming `field` when a spec breaks its invariants.
/// Constant kinds violate p(0) = v(0) = 0 and are refused unless allowed.
void validate(const IncidenceSpec& f, const std::string& field = "incidence");
void validate(const TreatmentSpec& p, bool allow_constant, const std::string& field = "treatment");
void validate(const VaccinationSpec& v, bool allow_constant, const std::string& field = "vaccination");
void validate(const DomainBox& box, const std::string& field = "lipschitz_box");

LipschitzBounds lipschitz_bounds(const IncidenceSpec& f, const VaccinationSpec& v,
                                 const TreatmentSpec& p, const DomainBox& box);

std::string_view to_string(IncidenceKind k);
std::string_view to_string(ResponseKind k);
IncidenceKind parse_incidence_kind(std::string_view s);
ResponseKind parse_response_kind(std::string_view s);

} // namespace dsir
