#pragma once

#include "dsir/dde.hpp"
#include "dsir/functions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dsir {

/// Rates of the delayed SIR system with vaccination and treatment (per day).
///
///   x' = inflow - contact*f(x,y) - death*x - vaccination*v(x(t-eta)) + immunity_loss*z
///   y' = conversion*f(x(t-tau), y) - treatment*p(y) - infected_death*y
///   z' = treatment*p(y(t-delta)) - immunity_loss*z
struct ModelParams {
    double inflow = 0.0;               // a
    double contact_rate = 0.0;         // b
    double vaccination_rate = 0.0;     // c
    double death_rate = 0.0;           // d
    double conversion_rate = 0.0;      // b1
    double treatment_rate = 0.0;       // r
    double infected_death_rate = 0.0;  // d1
    double immunity_loss_rate = 0.0;   // alpha

    bool operator==(const ModelParams&) const = default;
};

struct ModelFunctions {
    IncidenceSpec incidence;
    VaccinationSpec vaccination;
    TreatmentSpec treatment;

    bool operator==(const ModelFunctions&) const = default;
};

/// Lags in days: vaccination acts on x(t - eta), incidence on x(t - tau),
/// recovery inflow on y(t - delta).
struct DelaySpec {
    double vaccination = 0.0; // eta
    double incidence = 0.0;   // tau
    double treatment = 0.0;   // delta

    bool operator==(const DelaySpec&) const = default;
};

struct State {
    double x = 0.0; // susceptible
    double y = 0.0; // infected
    double z = 0.0; // recovered

    bool operator==(const State&) const = default;
    dde::Vector to_vector() const { return {x, y, z}; }
    static State from(std::span<const double> v) { return {v[0], v[1], v[2]}; }
};

void validate(const ModelParams& p, const std::string& field = "params");
void validate(const DelaySpec& d, const std::string& field = "delays");

/// Vector field of the system. The incidence term of y' uses the delayed
/// susceptible count together with the current infected count.
State rhs(const ModelParams& params, const ModelFunctions& fns, const State& now,
          double x_lag_vaccination, double x_lag_incidence, double y_lag_treatment);

struct Scenario;

/// Integrates the scenario over [0, t_end]. Integrator errors are rethrown with
/// the scenario name prepended.
dde::Trajectory simulate(const Scenario& scenario);

struct PositivityReport {
    double min_component = 0.0;
    std::optional<double> first_violation; // time of first component < -tol
    bool ok() const { return !first_violation; }
};

/// Scans every mesh node and interval midpoint in time order.
PositivityReport check_positivity(const dde::Trajectory& traj, double tol);

struct BoundednessCertificate {
    double x_rate = 0.0; // b*K1 + d + c*M1 - b1*K3
    double y_rate = 0.0; // b*K2 - b1*K4 + d1 + r*L1 - r*L2
    double gamma = 0.0;  // min of the two
    double bound = 0.0;  // max(a/gamma, phi0) when holds
    bool holds = false;  // gamma > 0
};

BoundednessCertificate boundedness_certificate(const ModelParams& params,
                                               const LipschitzBounds& bounds, double phi0);

/// Aggregate |x| + |y| + |z| - c*M1*int|x| (over eta) + b1*K3*int|x| (over tau)
/// + r*L2*int|y| (over delta), evaluated at t = 0 with constant history.
double phi_initial(const ModelParams& params, const LipschitzBounds& bounds,
                   const DelaySpec& delays, const State& init);

struct PhiSeries {
    std::vector<double> times;
    std::vector<double> values;
    bool has_negative = false;
    double max() const;
};

/// The same aggregate at every mesh node. Window integrals use Simpson's rule on
/// the Hermite interpolant; tabulated history windows use the trapezoid rule.
PhiSeries phi_series(const dde::Trajectory& traj, const ModelParams& params,
                     const LipschitzBounds& bounds, const DelaySpec& delays);

} // namespace dsir
