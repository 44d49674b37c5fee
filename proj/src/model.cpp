#include "dsir/model.hpp"

#include "dsir/errors.hpp"
#include "dsir/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dsir {
namespace {

void require_nonneg(double u, const std::string& field)
{
    if (!std::isfinite(u) || u < 0.0)
        throw ValidationError(field, "must be finite and >= 0");
}

// Integral of |component| of the trajectory over [lo, hi], history included.
class WindowIntegrator {
public:
    WindowIntegrator(const dde::Trajectory& traj, std::size_t component)
        : traj_(traj), comp_(component), prefix_(traj.size(), 0.0)
    {
        for (std::size_t i = 1; i < traj.size(); ++i)
            prefix_[i] = prefix_[i - 1] + piece(traj.times()[i - 1], traj.times()[i]);
    }

    double over(double lo, double hi) const
    {
        if (!(hi > lo))
            return 0.0;
        const double t0 = traj_.t0();
        double total = 0.0;
        if (lo < t0) {
            total += history_part(lo, std::min(hi, t0));
            lo = t0;
        }
        if (hi > lo)
            total += cumulative(hi) - cumulative(lo);
        return total;
    }

private:
    double value(double t) const { return std::abs(traj_.sample(t, comp_)); }

    // Simpson on the cubic interpolant of one mesh interval (exact without sign change).
    double piece(double a, double b) const
    {
        if (!(b > a))
            return 0.0;
        return (b - a) / 6.0 * (value(a) + 4.0 * value(0.5 * (a + b)) + value(b));
    }

    double cumulative(double t) const
    {
        const auto& ts = traj_.times();
        const auto it = std::upper_bound(ts.begin(), ts.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - ts.begin()) - 1;
        return prefix_[j] + piece(ts[j], t);
    }

    double history_part(double lo, double hi) const
    {
        const auto& h = traj_.history();
        if (h.is_constant())
            return std::abs(h.constant_value()[comp_]) * (hi - lo);
        std::vector<double> pts{lo};
        for (double t : h.times())
            if (t > lo && t < hi)
                pts.push_back(t);
        pts.push_back(hi);
        double sum = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            sum += 0.5 * (pts[i] - pts[i - 1]) *
                   (std::abs(h.at(pts[i - 1])[comp_]) + std::abs(h.at(pts[i])[comp_]));
        return sum;
    }

    const dde::Trajectory& traj_;
    std::size_t comp_;
    std::vector<double> prefix_;
};

} // namespace

void validate(const ModelParams& p, const std::string& field)
{
    require_nonneg(p.inflow, field + ".inflow");
    require_nonneg(p.contact_rate, field + ".contact_rate");
    require_nonneg(p.vaccination_rate, field + ".vaccination_rate");
    require_nonneg(p.death_rate, field + ".death_rate");
    require_nonneg(p.conversion_rate, field + ".conversion_rate");
    require_nonneg(p.treatment_rate, field + ".treatment_rate");
    require_nonneg(p.infected_death_rate, field + ".infected_death_rate");
    require_nonneg(p.immunity_loss_rate, field + ".immunity_loss_rate");
}

void validate(const DelaySpec& d, const std::string& field)
{
    require_nonneg(d.vaccination, field + ".vaccination");
    require_nonneg(d.incidence, field + ".incidence");
    require_nonneg(d.treatment, field + ".treatment");
}

State rhs(const ModelParams& k, const ModelFunctions& fns, const State& now,
          double x_lag_vaccination, double x_lag_incidence, double y_lag_treatment)
{
    const double infection = evaluate_incidence(fns.incidence, now.x, now.y);
    const double delayed_infection = evaluate_incidence(fns.incidence, x_lag_incidence, now.y);
    const double vaccinated = evaluate_vaccination(fns.vaccination, x_lag_vaccination);
    const double treated = evaluate_treatment(fns.treatment, now.y);
    const double delayed_treated = evaluate_treatment(fns.treatment, y_lag_treatment);

    State d;
    d.x = k.inflow - k.contact_rate * infection - k.death_rate * now.x -
          k.vaccination_rate * vaccinated + k.immunity_loss_rate * now.z;
    d.y = k.conversion_rate * delayed_infection - k.treatment_rate * treated -
          k.infected_death_rate * now.y;
    d.z = k.treatment_rate * delayed_treated - k.immunity_loss_rate * now.z;
    if (!std::isfinite(d.x) || !std::isfinite(d.y) || !std::isfinite(d.z))
        throw NumericalBlowup(0.0, "vector field evaluated to a non-finite value");
    return d;
}

dde::Trajectory simulate(const Scenario& s)
{
    validate(s);
    const std::array<double, 3> lags{s.delays.vaccination, s.delays.incidence, s.delays.treatment};
    auto field = [&](double t, const dde::Vector& now, const std::vector<dde::Vector>& lagged) {
        try {
            const State d = rhs(s.params, s.functions, State::from(now), lagged[0][0], lagged[1][0],
                                lagged[2][1]);
            return d.to_vector();
        } catch (const DomainError&) {
            throw NumericalBlowup(t, "non-finite state reached the vector field at t=" +
                                         std::to_string(t));
        } catch (const NumericalBlowup&) {
            throw NumericalBlowup(t, "non-finite derivative at t=" + std::to_string(t));
        }
    };
    try {
        return dde::integrate(field, lags, s.effective_history(), s.initial.to_vector(), 0.0,
                              s.t_end, s.integrator);
    } catch (const NumericalBlowup& e) {
        throw NumericalBlowup(e.time(), "scenario '" + s.name + "': " + e.what());
    } catch (const IntegratorConfigError& e) {
        throw IntegratorConfigError("scenario '" + s.name + "': " + e.what());
    }
}

PositivityReport check_positivity(const dde::Trajectory& traj, double tol)
{
    PositivityReport out;
    out.min_component = std::numeric_limits<double>::infinity();
    auto scan = [&](double t, std::span<const double> v) {
        for (double u : v) {
            out.min_component = std::min(out.min_component, u);
            if (u < -tol && !out.first_violation)
                out.first_violation = t;
        }
    };
    const auto& ts = traj.times();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        scan(ts[i], traj.state(i));
        if (i + 1 < ts.size()) {
            const double mid = 0.5 * (ts[i] + ts[i + 1]);
            const auto v = traj.sample(mid);
            scan(mid, v);
        }
    }
    return out;
}

BoundednessCertificate boundedness_certificate(const ModelParams& k, const LipschitzBounds& L,
                                               double phi0)
{
    BoundednessCertificate c;
    c.x_rate = k.contact_rate * L.incidence_dx_min + k.death_rate +
               k.vaccination_rate * L.vaccination_min - k.conversion_rate * L.incidence_dx_max;
    c.y_rate = k.contact_rate * L.incidence_dy_min - k.conversion_rate * L.incidence_dy_max +
               k.infected_death_rate + k.treatment_rate * L.treatment_min -
               k.treatment_rate * L.treatment_max;
    c.gamma = std::min(c.x_rate, c.y_rate);
    c.holds = c.gamma > 0.0;
    c.bound = c.holds ? std::max(k.inflow / c.gamma, phi0) : std::numeric_limits<double>::infinity();
    return c;
}

double phi_initial(const ModelParams& k, const LipschitzBounds& L, const DelaySpec& lag,
                   const State& init)
{
    const double cm1 = k.vaccination_rate * L.vaccination_min;
    const double b1k3 = k.conversion_rate * L.incidence_dx_max;
    const double rl2 = k.treatment_rate * L.treatment_max;
    return (1.0 - cm1 * lag.vaccination + b1k3 * lag.incidence) * std::abs(init.x) +
           (1.0 + rl2 * lag.treatment) * std::abs(init.y) + std::abs(init.z);
}

double PhiSeries::max() const
{
    return values.empty() ? -std::numeric_limits<double>::infinity()
                          : *std::max_element(values.begin(), values.end());
}

PhiSeries phi_series(const dde::Trajectory& traj, const ModelParams& k, const LipschitzBounds& L,
                     const DelaySpec& lag)
{
    const WindowIntegrator ix(traj, 0);
    const WindowIntegrator iy(traj, 1);
    const double cm1 = k.vaccination_rate * L.vaccination_min;
    const double b1k3 = k.conversion_rate * L.incidence_dx_max;
    const double rl2 = k.treatment_rate * L.treatment_max;

    PhiSeries out;
    out.times = traj.times();
    out.values.reserve(out.times.size());
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        const double t = out.times[i];
        const auto s = traj.state(i);
        const double phi = std::abs(s[0]) + std::abs(s[1]) + std::abs(s[2]) -
                           cm1 * ix.over(t - lag.vaccination, t) +
                           b1k3 * ix.over(t - lag.incidence, t) + rl2 * iy.over(t - lag.treatment, t);
        out.has_negative = out.has_negative || phi < 0.0;
        out.values.push_back(phi);
    }
    return out;
}

} // namespace dsir
