#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dsir::dde {

using Vector = std::vector<double>;

struct IntegratorConfig {
    double h = 0.01;           // upper bound on the step, days
    int breakpoint_depth = 3;  // lag-sum depth forced onto the mesh, 0..5
    std::size_t max_steps = 50'000'000;

    bool operator==(const IntegratorConfig&) const = default;
};

/// State before the initial time: a constant vector or a linearly interpolated table.
class History {
public:
    History() = default;

    static History constant(Vector value);
    /// Times must be strictly increasing; each state has the same dimension.
    static History tabulated(std::vector<double> times, std::vector<Vector> states);

    bool is_constant() const noexcept { return times_.empty(); }
    const Vector& constant_value() const noexcept { return value_; }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<Vector>& states() const noexcept { return states_; }
    std::size_t dimension() const noexcept;

    /// Throws RangeError outside the tabulated span.
    Vector at(double t) const;

    bool operator==(const History&) const = default;

private:
    Vector value_;
    std::vector<double> times_;
    std::vector<Vector> states_;
};

/// Dense-output solution: mesh nodes with state and derivative, cubic Hermite in between.
class Trajectory {
public:
    Trajectory(History history, double t0, std::size_t dimension);

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return times_.size(); }
    double t0() const noexcept { return t0_; }
    double t_end() const { return times_.back(); }
    const std::vector<double>& times() const noexcept { return times_; }
    std::span<const double> state(std::size_t i) const { return {&states_[i * dim_], dim_}; }
    std::span<const double> derivative(std::size_t i) const { return {&derivs_[i * dim_], dim_}; }
    const History& history() const noexcept { return history_; }

    /// State at t: history for t < t0, Hermite interpolant on [t0, t_end],
    /// exact at nodes. Throws RangeError beyond the computed end.
    Vector sample(double t) const;
    double sample(double t, std::size_t component) const;

    void append(double t, std::span<const double> state, std::span<const double> derivative);

private:
    double hermite(std::size_t interval, double t, std::size_t component) const;

    History history_;
    double t0_;
    std::size_t dim_;
    std::vector<double> times_;
    Vector states_;
    Vector derivs_;
};

/// Right-hand side with one delayed state per lag, in lag order.
using DelayedRhs =
    std::function<Vector(double t, const Vector& now, const std::vector<Vector>& delayed)>;
using OdeRhs = std::function<Vector(double t, const Vector& now)>;

/// All sums n_1*lag_1 + ... with n_i >= 0 and sum n_i <= depth that do not exceed
/// t_end, deduplicated within 1e-12 and sorted. Always contains 0.
std::vector<double> breakpoints(std::span<const double> lags, double t_end, int depth);

/// min(h, span/100, lag/10 for every positive lag not much shorter than the step).
/// Lags below a tenth of the step are served by in-step interpolation instead.
double effective_step(std::span<const double> lags, double span, double h);

/// Breakpoints shifted to t0 plus uniform subdivisions of size <= effective step.
std::vector<double> build_mesh(std::span<const double> lags, double t0, double t_end,
                               const IntegratorConfig& cfg);

/// Method of steps with classical RK4 on the breakpoint-aligned mesh.
/// Throws NumericalBlowup on a non-finite state, IntegratorConfigError on a bad mesh.
Trajectory integrate(const DelayedRhs& rhs, std::span<const double> lags, const History& history,
                     const Vector& init, double t0, double t_end, const IntegratorConfig& cfg);

/// Plain RK4 over a given mesh; the zero-lag reference path.
Trajectory integrate_ode(const OdeRhs& rhs, const Vector& init, std::span<const double> mesh);

} // namespace dsir::dde
