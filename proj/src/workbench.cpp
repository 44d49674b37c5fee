#include "dsir/workbench.hpp"

#include "dsir/analysis.hpp"
#include "dsir/errors.hpp"
#include "dsir/model.hpp"
#include "dsir/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace dsir {
namespace {

void append_number(std::string& out, double u)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", u);
    out += buf;
}

Overrides axis_override(SweepAxis axis, double value)
{
    Overrides o;
    switch (axis) {
    case SweepAxis::eta:
        o.eta = value;
        break;
    case SweepAxis::tau:
        o.tau = value;
        break;
    case SweepAxis::delta:
        o.delta = value;
        break;
    case SweepAxis::r:
        o.r = value;
        break;
    case SweepAxis::c:
        o.c = value;
        break;
    }
    return o;
}

SweepRow summarize(const Scenario& s)
{
    const dde::Trajectory traj = simulate(s);
    SweepRow row;
    row.peak_y = -std::numeric_limits<double>::infinity();
    for (double t : output_grid(s.t_end, s.output_step)) {
        const auto v = traj.sample(t);
        if (v[1] > row.peak_y) {
            row.peak_y = v[1];
            row.t_peak = t;
        }
        row.final_y = v[1];
        row.final_z = v[2];
    }
    return row;
}

} // namespace

std::vector<double> output_grid(double t_end, double step)
{
    const auto n = static_cast<std::size_t>(std::floor(t_end / step + 1e-9));
    std::vector<double> ts(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        ts[k] = std::min(static_cast<double>(k) * step, t_end);
    return ts;
}

std::string trajectory_csv(const dde::Trajectory& traj, double t_end, double step)
{
    std::string out = "t,x,y,z\n";
    for (double t : output_grid(t_end, step)) {
        const auto v = traj.sample(t);
        append_number(out, t);
        for (double u : v) {
            out += ',';
            append_number(out, u);
        }
        out += '\n';
    }
    return out;
}

std::string run_simulate(const Scenario& base, const Overrides& overrides)
{
    const Scenario s = apply(base, overrides);
    return trajectory_csv(simulate(s), s.t_end, s.output_step);
}

std::string plot_script(std::string_view csv_path, std::string_view title)
{
    std::string p(csv_path);
    std::string t(title);
    return "set datafile separator ','\n"
           "set key autotitle columnhead\n"
           "set xlabel 't (days)'\n"
           "set ylabel 'population'\n"
           "set title '" + t + "'\n"
           "set multiplot layout 3,1\n"
           "plot '" + p + "' using 1:2 with lines title 'x'\n"
           "plot '" + p + "' using 1:3 with lines title 'y'\n"
           "plot '" + p + "' using 1:4 with lines title 'z'\n"
           "unset multiplot\n";
}

AnalyzeOutput run_analyze(const Scenario& s)
{
    const StabilityReport rep = full_report(s);
    return {render_report(rep, s), rep.failed()};
}

SweepAxis parse_sweep_axis(std::string_view s)
{
    for (auto a : {SweepAxis::eta, SweepAxis::tau, SweepAxis::delta, SweepAxis::r, SweepAxis::c})
        if (to_string(a) == s)
            return a;
    throw ValidationError("axis", "expected eta, tau, delta, r or c, got '" + std::string(s) + "'");
}

std::string_view to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::eta:
        return "eta";
    case SweepAxis::tau:
        return "tau";
    case SweepAxis::delta:
        return "delta";
    case SweepAxis::r:
        return "r";
    case SweepAxis::c:
        return "c";
    }
    return "?";
}

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& sweep)
{
    if (sweep.grid.empty())
        throw ValidationError("grid", "must not be empty");
    for (double v : sweep.grid)
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("grid", "values must be finite and >= 0");
    validate(base);

    std::vector<SweepRow> rows(sweep.grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) {
            const double value = sweep.grid[k];
            try {
                rows[k] = summarize(apply(base, axis_override(sweep.axis, value)));
            } catch (const std::exception& e) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                rows[k] = {value, nan, nan, nan, nan, e.what()};
                if (rows[k].error.empty())
                    rows[k].error = "run failed";
            }
            rows[k].value = value;
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min(hw, rows.size());
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < n_threads; ++k)
        pool.emplace_back(worker);
    worker();
    pool.clear(); // join before the rows leave this scope
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "value,peak_y,t_peak,final_y,final_z\n";
    for (const auto& r : rows) {
        append_number(out, r.value);
        for (double u : {r.peak_y, r.t_peak, r.final_y, r.final_z}) {
            out += ',';
            append_number(out, u);
        }
        out += '\n';
    }
    return out;
}

} // namespace dsir
