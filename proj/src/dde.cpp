#include "dsir/dde.hpp"

#include "dsir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dsir::dde {
namespace {

constexpr double kDedupTol = 1e-12;

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double u) { return std::isfinite(u); });
}

// Classical RK4 with the first stage supplied by the caller. `stage(t, y)` must
// return dy/dt; both the delayed and the plain ODE path go through here so a
// zero-lag run performs exactly the same arithmetic as the ODE path.
template <typename Stage>
Vector rk4_step(Stage&& stage, double t, const Vector& y, double h, const Vector& k1)
{
    const std::size_t n = y.size();
    const double half = 0.5 * h;
    Vector tmp(n);

    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + half * k1[i];
    const Vector k2 = stage(t + half, tmp);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + half * k2[i];
    const Vector k3 = stage(t + half, tmp);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * k3[i];
    const Vector k4 = stage(t + h, tmp);

    Vector next(n);
    for (std::size_t i = 0; i < n; ++i)
        next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return next;
}

void check_lags(std::span<const double> lags)
{
    for (double lag : lags)
        if (!std::isfinite(lag) || lag < 0.0)
            throw IntegratorConfigError("lags must be finite and >= 0");
}

void enumerate_sums(std::span<const double> lags, std::size_t from, double acc, int budget,
                    double t_end, std::vector<double>& out)
{
    out.push_back(acc);
    if (budget == 0)
        return;
    for (std::size_t i = from; i < lags.size(); ++i) {
        if (lags[i] <= 0.0)
            continue;
        const double next = acc + lags[i];
        if (next <= t_end + kDedupTol)
            enumerate_sums(lags, i, next, budget - 1, t_end, out);
    }
}

void dedup_sorted(std::vector<double>& v)
{
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    out.reserve(v.size());
    for (double u : v)
        if (out.empty() || u - out.back() > kDedupTol)
            out.push_back(u);
    v.swap(out);
}

} // namespace

// ---------------------------------------------------------------------------
// History

History History::constant(Vector value)
{
    History h;
    h.value_ = std::move(value);
    return h;
}

History History::tabulated(std::vector<double> times, std::vector<Vector> states)
{
    if (times.empty() || times.size() != states.size())
        throw IntegratorConfigError("tabulated history needs matching, nonempty time and state lists");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw IntegratorConfigError("tabulated history times must be strictly increasing");
    for (const auto& s : states)
        if (s.size() != states.front().size())
            throw IntegratorConfigError("tabulated history states differ in dimension");
    History h;
    h.times_ = std::move(times);
    h.states_ = std::move(states);
    return h;
}

std::size_t History::dimension() const noexcept
{
    return is_constant() ? value_.size() : states_.front().size();
}

Vector History::at(double t) const
{
    if (is_constant())
        return value_;
    if (t < times_.front() - kDedupTol || t > times_.back() + kDedupTol)
        throw RangeError("history requested at t=" + std::to_string(t) + " outside its table");
    if (t <= times_.front())
        return states_.front();
    if (t >= times_.back())
        return states_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
    Vector out(states_[j].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * states_[j - 1][i] + w * states_[j][i];
    return out;
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory::Trajectory(History history, double t0, std::size_t dimension)
    : history_(std::move(history)), t0_(t0), dim_(dimension)
{
}

void Trajectory::append(double t, std::span<const double> state, std::span<const double> derivative)
{
    if (!times_.empty() && !(t > times_.back()))
        throw IntegratorConfigError("mesh nodes must be strictly increasing");
    times_.push_back(t);
    states_.insert(states_.end(), state.begin(), state.end());
    derivs_.insert(derivs_.end(), derivative.begin(), derivative.end());
}

double Trajectory::hermite(std::size_t i, double t, std::size_t c) const
{
    const double h = times_[i + 1] - times_[i];
    const double s = (t - times_[i]) / h;
    const double s2 = s * s;
    const double one_m = 1.0 - s;
    const double h00 = (1.0 + 2.0 * s) * one_m * one_m;
    const double h10 = s * one_m * one_m;
    const double h01 = s2 * (3.0 - 2.0 * s);
    const double h11 = s2 * (s - 1.0);
    return h00 * states_[i * dim_ + c] + h10 * h * derivs_[i * dim_ + c] +
           h01 * states_[(i + 1) * dim_ + c] + h11 * h * derivs_[(i + 1) * dim_ + c];
}

double Trajectory::sample(double t, std::size_t component) const
{
    if (t < t0_)
        return history_.at(t)[component];
    if (times_.empty() || t > times_.back())
        throw RangeError("trajectory sampled at t=" + std::to_string(t) + " beyond its computed end");
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
    if (times_[j] == t)
        return states_[j * dim_ + component];
    return hermite(j, t, component);
}

Vector Trajectory::sample(double t) const
{
    if (t < t0_)
        return history_.at(t);
    if (times_.empty() || t > times_.back())
        throw RangeError("trajectory sampled at t=" + std::to_string(t) + " beyond its computed end");
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
    Vector out(dim_);
    if (times_[j] == t) {
        std::copy_n(states_.begin() + static_cast<std::ptrdiff_t>(j * dim_), dim_, out.begin());
        return out;
    }
    for (std::size_t c = 0; c < dim_; ++c)
        out[c] = hermite(j, t, c);
    return out;
}

// ---------------------------------------------------------------------------
// Mesh

std::vector<double> breakpoints(std::span<const double> lags, double t_end, int depth)
{
    std::vector<double> out;
    enumerate_sums(lags, 0, 0.0, std::max(depth, 0), t_end, out);
    dedup_sorted(out);
    return out;
}

double effective_step(std::span<const double> lags, double span, double h)
{
    const double base = std::min(h, span / 100.0);
    double step = base;
    for (double lag : lags)
        if (lag > 0.0 && lag >= base / 10.0)
            step = std::min(step, lag / 10.0);
    return step;
}

std::vector<double> build_mesh(std::span<const double> lags, double t0, double t_end,
                               const IntegratorConfig& cfg)
{
    check_lags(lags);
    if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t_end > t0))
        throw IntegratorConfigError("integration span must be finite and nonempty");
    if (!std::isfinite(cfg.h) || !(cfg.h > 0.0))
        throw IntegratorConfigError("step h must be finite and > 0");
    if (cfg.breakpoint_depth < 0 || cfg.breakpoint_depth > 5)
        throw IntegratorConfigError("breakpoint depth must lie in 0..5");

    const double span = t_end - t0;
    const double h = effective_step(lags, span, cfg.h);
    if (!(h > span * 1e-12))
        throw IntegratorConfigError("step underflow: effective step " + std::to_string(h));

    std::vector<double> anchors = breakpoints(lags, span, cfg.breakpoint_depth);
    anchors.push_back(span);
    dedup_sorted(anchors);
    if (anchors.back() < span)
        anchors.push_back(span);

    std::vector<double> mesh{t0};
    for (std::size_t k = 1; k < anchors.size(); ++k) {
        const double a = anchors[k - 1];
        const double b = k + 1 == anchors.size() ? span : anchors[k];
        const double len = b - a;
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h - 1e-9)));
        if (mesh.size() + n > cfg.max_steps + 1)
            throw IntegratorConfigError("mesh exceeds max_steps=" + std::to_string(cfg.max_steps));
        for (std::size_t i = 1; i < n; ++i)
            mesh.push_back(t0 + a + len * static_cast<double>(i) / static_cast<double>(n));
        mesh.push_back(t0 + b);
    }
    mesh.back() = t_end;
    return mesh;
}

// ---------------------------------------------------------------------------
// Integration

Trajectory integrate(const DelayedRhs& rhs, std::span<const double> lags, const History& history,
                     const Vector& init, double t0, double t_end, const IntegratorConfig& cfg)
{
    const std::vector<double> mesh = build_mesh(lags, t0, t_end, cfg);
    const std::size_t n = init.size();
    if (history.dimension() != n)
        throw IntegratorConfigError("history dimension differs from the initial state");
    if (!all_finite(init))
        throw NumericalBlowup(t0, "initial state is not finite");
    if (!history.is_constant()) {
        const double max_lag = lags.empty() ? 0.0 : *std::max_element(lags.begin(), lags.end());
        if (history.times().front() > t0 - max_lag + kDedupTol || history.times().back() < t0 - kDedupTol)
            throw IntegratorConfigError("tabulated history must cover [t0 - max lag, t0]");
    }

    Trajectory traj(history, t0, n);
    std::vector<Vector> delayed(lags.size());

    // Delayed states for a stage at time s holding state y. Lookups that reach past
    // the last node (lags shorter than the step) blend the last node with the stage.
    auto lookup = [&](double s, const Vector& y) -> const std::vector<Vector>& {
        const double t_last = traj.size() ? traj.t_end() : t0;
        for (std::size_t k = 0; k < lags.size(); ++k) {
            const double lag = lags[k];
            const double target = s - lag;
            if (lag == 0.0) {
                delayed[k] = y;
            } else if (target <= t_last) {
                delayed[k] = traj.sample(target);
            } else {
                const std::size_t last = traj.size() - 1;
                const auto base = traj.state(last);
                const double w = (target - t_last) / (s - t_last);
                delayed[k].resize(n);
                for (std::size_t i = 0; i < n; ++i)
                    delayed[k][i] = base[i] + w * (y[i] - base[i]);
            }
        }
        return delayed;
    };
    auto stage = [&](double s, const Vector& y) { return rhs(s, y, lookup(s, y)); };
    auto checked = [&](double s, const Vector& v, const char* what) {
        if (!all_finite(v) || v.size() != n)
            throw NumericalBlowup(s, std::string("non-finite ") + what + " at t=" + std::to_string(s));
    };

    Vector f = stage(t0, init);
    checked(t0, f, "derivative");
    traj.append(t0, init, f);

    Vector y = init;
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double t = mesh[k];
        const double h = mesh[k + 1] - t;
        Vector next = rk4_step(stage, t, y, h, f);
        checked(mesh[k + 1], next, "state");
        Vector f_next = stage(mesh[k + 1], next);
        checked(mesh[k + 1], f_next, "derivative");
        traj.append(mesh[k + 1], next, f_next);
        y = std::move(next);
        f = std::move(f_next);
    }
    return traj;
}

Trajectory integrate_ode(const OdeRhs& rhs, const Vector& init, std::span<const double> mesh)
{
    if (mesh.size() < 2)
        throw IntegratorConfigError("mesh needs at least two nodes");
    Trajectory traj(History::constant(init), mesh.front(), init.size());
    Vector y = init;
    Vector f = rhs(mesh.front(), y);
    traj.append(mesh.front(), y, f);
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double t = mesh[k];
        Vector next = rk4_step(rhs, t, y, mesh[k + 1] - t, f);
        if (!all_finite(next))
            throw NumericalBlowup(mesh[k + 1], "non-finite state at t=" + std::to_string(mesh[k + 1]));
        Vector f_next = rhs(mesh[k + 1], next);
        traj.append(mesh[k + 1], next, f_next);
        y = std::move(next);
        f = std::move(f_next);
    }
    return traj;
}

} // namespace dsir::dde
