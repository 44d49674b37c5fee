#pragma once

#include "dsir/dde.hpp"
#include "dsir/scenario.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dsir {

/// Uniform output grid 0, step, 2*step, ... with floor(t_end/step) + 1 samples.
std::vector<double> output_grid(double t_end, double step);

/// `t,x,y,z` rows with 9 significant digits.
std::string trajectory_csv(const dde::Trajectory& traj, double t_end, double step);

/// Simulates the scenario with the overrides applied; returns the CSV text.
std::string run_simulate(const Scenario& base, const Overrides& overrides);

/// gnuplot commands drawing x, y and z against t from `csv_path`.
std::string plot_script(std::string_view csv_path, std::string_view title);

struct AnalyzeOutput {
    std::string json;
    bool failed = false; // a section did not converge
};

AnalyzeOutput run_analyze(const Scenario& s);

enum class SweepAxis { eta, tau, delta, r, c };
SweepAxis parse_sweep_axis(std::string_view s);
std::string_view to_string(SweepAxis a);

struct SweepSpec {
    SweepAxis axis = SweepAxis::tau;
    std::vector<double> grid;
};

struct SweepRow {
    double value = 0.0;
    double peak_y = 0.0;
    double t_peak = 0.0;
    double final_y = 0.0;
    double final_z = 0.0;
    std::string error; // nonempty when the run failed; numeric fields are NaN
};

/// One simulation per grid value, run concurrently, rows in grid order. Peak and final
/// values are read from the output grid. Throws ValidationError for an empty grid or
/// negative values.
std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& sweep);

/// `value,peak_y,t_peak,final_y,final_z`; failed rows carry nan.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Entry point of the command-line tool. Exit codes: 0 ok, 2 bad config or flags,
/// 3 numerical failure, 4 analysis non-convergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dsir
