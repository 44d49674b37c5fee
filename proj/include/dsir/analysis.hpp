#pragma once

#include "dsir/functions.hpp"
#include "dsir/model.hpp"
#include "dsir/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsir {

enum class EquilibriumKind { disease_free, endemic };

struct Equilibrium {
    EquilibriumKind kind = EquilibriumKind::disease_free;
    State point;
    double residual = 0.0;
    int iterations = 0;
};

/// Max-abs residual of the three equilibrium equations at `s`.
double equilibrium_residual(const ModelParams& k, const ModelFunctions& fns, const State& s);

/// Throws DomainError unless d > 0. Full mode bisects a - d*x - c*v(x) on [0, a/d].
Equilibrium disease_free_equilibrium(const ModelParams& k, const VaccinationSpec& v, DfeMode mode);

/// The map whose fixed points are the equilibria:
///   x = (a - b f(x,y) - c v(x) + alpha z)/d,  y = (b1 f(x,y) - r p(y))/d1,  z = r p(y)/alpha
State equilibrium_map(const ModelParams& k, const ModelFunctions& fns, const State& s);

struct FixedPointResult {
    State point;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// X <- (1 - damping) X + damping P(X) until the residual is <= tol or `max_iter`
/// steps pass. Stops early on a non-finite iterate (converged = false).
FixedPointResult fixed_point_iterate(const ModelParams& k, const ModelFunctions& fns, State init,
                                     double damping, int max_iter, double tol);

/// Damped Newton on the equilibrium residual with a finite-difference Jacobian.
FixedPointResult newton_solve(const ModelParams& k, const ModelFunctions& fns, State init,
                              int max_iter, double tol);

struct EndemicResult {
    std::optional<Equilibrium> equilibrium; // unset: none with all components > 0
    State converged_point;                  // where the solver stopped
    double residual = 0.0;
    int iterations = 0;
    std::string method; // "fixed_point" or "newton"
};

/// Damped (0.5) fixed-point iteration for 200 steps, then Newton, 1000 steps in total.
/// Throws AnalysisNonConvergence with the last residual when neither reaches `tol`.
EndemicResult endemic_equilibrium(const ModelParams& k, const ModelFunctions& fns,
                                  const State& init, double tol = 1e-10);

struct ContractionConstants {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double A_bar = 0.0;
    bool unique() const { return A_bar < 1.0; }
};

/// Throws DomainError when d, d1 or alpha is zero.
ContractionConstants contraction_constants(const ModelParams& k, const LipschitzBounds& L);

struct R0Result {
    double r0 = 0.0;
    double x_star_used = 0.0;
    double f_y_at_dfe = 0.0;
    double p_prime_0 = 0.0;
    DfeMode mode = DfeMode::full_dfe;
};

R0Result basic_reproduction_number(const ModelParams& k, const IncidenceSpec& f,
                                   const TreatmentSpec& p, const Equilibrium& dfe, DfeMode mode);

enum class RootMethod { closed_form_sign, bisection, none_found };
std::string_view to_string(RootMethod m);

/// Scalar factor lambda = A + B exp(-lambda T).
struct CharacteristicFactor {
    double A_coef = 0.0;
    double B_coef = 0.0;
    double T_lag = 0.0;
    std::optional<double> rightmost_real_root;
    RootMethod method = RootMethod::none_found;

    /// Root < 0, or A + |B| < 0 when no real root exists.
    bool stable() const;
};

CharacteristicFactor rightmost_real_root(double A, double B, double T);

enum class Stability { stable, unstable, inconclusive, not_applicable };
std::string_view to_string(Stability s);

struct Condition {
    std::string name;
    double value = 0.0;
    std::string relation; // "< 1" or "> 0"
    bool holds = false;
};

struct NamedFactor {
    std::string name;
    CharacteristicFactor factor;
};

struct LocalVerdict {
    Stability verdict = Stability::not_applicable;
    std::vector<Condition> conditions;
    std::vector<NamedFactor> factors;
    std::vector<std::string> flags;
};

LocalVerdict local_stability_dfe(const ModelParams& k, const ModelFunctions& fns,
                                 const Equilibrium& dfe, const R0Result& r0, const DelaySpec& lag);

LocalVerdict local_stability_endemic(const ModelParams& k, const ModelFunctions& fns,
                                     const Equilibrium& ee, const DelaySpec& lag);

struct GlobalVerdict {
    double x_condition = 0.0;            // bK1 - b1K3 + d + cM1
    double y_condition_derivation = 0.0; // bK2 - b1K4 + rL1 - rL2 + d1
    double y_condition_strict = 0.0;     // bK2 - b1K4 + rL1 + rL2 + d1
    bool holds_derivation = false;
    bool holds_strict = false;
    FormulaMode mode = FormulaMode::derivation;
    bool holds() const { return mode == FormulaMode::derivation ? holds_derivation : holds_strict; }
    bool modes_disagree() const { return holds_derivation != holds_strict; }
};

GlobalVerdict global_delay_independent(const ModelParams& k, const LipschitzBounds& L,
                                       FormulaMode mode);

struct DelayRanges {
    double A1 = 0.0, A2 = 0.0;
    double B1 = 0.0, B2 = 0.0, B3 = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
    double D1 = 0.0, D2 = 0.0;
    double r_max = 0.0; // bound on the vaccination lag
    double s_max = 0.0; // bound on the incidence lag
    double q_max = 0.0; // bound on the treatment lag
    bool feasible = false;
    FormulaMode mode = FormulaMode::derivation;

    /// B3*eta - C3*tau, the coefficient of z in the Lyapunov derivative.
    double z_coefficient(const DelaySpec& lag) const { return B3 * lag.vaccination - C3 * lag.incidence; }
    bool contains(const DelaySpec& lag) const;
};

/// Coefficients of the delay-dependent Lyapunov argument; min over positive denominators.
DelayRanges delay_ranges(const ModelParams& k, const LipschitzBounds& L, FormulaMode mode);

/// Ranges from prescribed coefficients (A1..D2 given), for property tests.
void finish_ranges(DelayRanges& r);

struct PublishedComparison {
    std::string quantity;
    double computed = 0.0;
    double computed_unit_strict = 0.0; // every slope constant 1, formulas as stated
    std::vector<double> published;
    bool matches_computed = false;    // within 0.1% of a candidate
    bool matches_unit_strict = false;
};

enum class SectionStatus { ok, none, failed };
std::string_view to_string(SectionStatus s);

struct StabilityReport {
    std::string scenario;
    LipschitzBounds lipschitz;
    Equilibrium dfe;
    R0Result r0;
    SectionStatus endemic_status = SectionStatus::none;
    std::optional<Equilibrium> endemic;
    std::string endemic_message;
    ContractionConstants contraction;
    LocalVerdict local_dfe;
    LocalVerdict local_endemic;
    GlobalVerdict global_independent;
    DelayRanges ranges;
    std::vector<PublishedComparison> range_comparison;
    BoundednessCertificate boundedness;
    std::vector<std::string> flags;

    bool failed() const { return endemic_status == SectionStatus::failed; }
};

/// Every analysis for the scenario. Endemic non-convergence is recorded in the
/// report, not thrown. Throws ValidationError when d, d1 or alpha is not positive.
StabilityReport full_report(const Scenario& s);

} // namespace dsir
