#include "dsir/config.hpp"
#include "dsir/errors.hpp"
#include "dsir/workbench.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

namespace dsir {
namespace {

enum Exit { ok = 0, bad_input = 2, numerical = 3, non_convergence = 4 };

struct SourceOptions {
    std::string scenario;
    std::string config;
    bool compat = false;
    bool strict_paper = false;
};

struct OverrideOptions {
    std::string preset;
    std::optional<double> eta, tau, delta, r, c, t_end, output_step;
};

void add_source(CLI::App* sub, SourceOptions& o)
{
    auto* name = sub->add_option("--scenario", o.scenario, "Builtin scenario (tamilnadu, india, usa)");
    auto* path = sub->add_option("--config", o.config, "Scenario config file (JSON)");
    name->excludes(path);
    sub->add_flag("--compat", o.compat, "Disease-free point x* = a/d (reproduces published R0)");
    sub->add_flag("--strict-paper", o.strict_paper, "Use the stability formulas exactly as stated");
}

void add_overrides(CLI::App* sub, OverrideOptions& o, bool with_output_step)
{
    sub->add_option("--preset", o.preset, "Named preset of the scenario (e.g. fig2)");
    sub->add_option("--eta", o.eta, "Vaccination lag (days)");
    sub->add_option("--tau", o.tau, "Incidence lag (days)");
    sub->add_option("--delta", o.delta, "Treatment lag (days)");
    sub->add_option("--r", o.r, "Treatment rate");
    sub->add_option("--c", o.c, "Vaccination rate");
    sub->add_option("--t-end", o.t_end, "Final time (days)");
    if (with_output_step)
        sub->add_option("--output-step", o.output_step, "Output sampling interval (days)");
}

Scenario load(const SourceOptions& o)
{
    if (o.scenario.empty() && o.config.empty())
        throw ValidationError("scenario", "one of --scenario or --config is required");
    Scenario s = o.config.empty() ? builtin_scenario(o.scenario) : load_scenario_file(o.config);
    if (o.compat)
        s.dfe_mode = DfeMode::paper_compat;
    if (o.strict_paper)
        s.formula_mode = FormulaMode::strict_paper;
    return s;
}

Overrides merged(const Scenario& s, const OverrideOptions& o)
{
    Overrides v;
    if (!o.preset.empty()) {
        const NamedPreset* p = s.find_preset(o.preset);
        if (!p)
            throw ValidationError("preset", "scenario '" + s.name + "' has no preset '" + o.preset + "'");
        v = p->values;
    }
    auto take = [](std::optional<double>& dst, const std::optional<double>& src) {
        if (src)
            dst = src;
    };
    take(v.eta, o.eta);
    take(v.tau, o.tau);
    take(v.delta, o.delta);
    take(v.r, o.r);
    take(v.c, o.c);
    take(v.t_end, o.t_end);
    take(v.output_step, o.output_step);
    return v;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, end - start);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size())
            throw ValidationError("grid", "cannot read '" + item + "' as a number");
        out.push_back(v);
        start = end + 1;
    }
    return out;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text))
        throw ValidationError("out", "cannot write '" + path + "'");
}

void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty())
        out << text;
    else
        write_file(path, text);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Delayed SIR epidemic model with vaccination and treatment", "dsir"};
    app.require_subcommand(1);

    auto* scenarios = app.add_subcommand("scenarios", "List builtin scenarios");

    SourceOptions dump_src;
    auto* dump = app.add_subcommand("dump", "Print a scenario as a config document");
    add_source(dump, dump_src);

    SourceOptions an_src;
    std::string an_out;
    auto* analyze = app.add_subcommand("analyze", "Stability analysis report (JSON)");
    add_source(analyze, an_src);
    analyze->add_option("--out", an_out, "Write the report here instead of standard output");

    SourceOptions sim_src;
    OverrideOptions sim_ovr;
    std::string sim_out;
    bool sim_plot = false;
    auto* sim = app.add_subcommand("simulate", "Integrate the model and write t,x,y,z CSV");
    add_source(sim, sim_src);
    add_overrides(sim, sim_ovr, true);
    sim->add_option("--out", sim_out, "CSV path (standard output when omitted)");
    sim->add_flag("--plot", sim_plot, "Also write a gnuplot script <out>.gp");

    SourceOptions sw_src;
    OverrideOptions sw_ovr;
    std::string sw_axis;
    std::string sw_grid;
    std::string sw_out;
    auto* sw = app.add_subcommand("sweep", "Summaries over a grid of one delay or rate");
    add_source(sw, sw_src);
    add_overrides(sw, sw_ovr, true);
    sw->add_option("--axis", sw_axis, "eta, tau, delta, r or c")->required();
    sw->add_option("--grid", sw_grid, "Comma-separated values")->required();
    sw->add_option("--out", sw_out, "CSV path (standard output when omitted)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Exit::ok : Exit::bad_input;
    }

    try {
        if (*scenarios) {
            for (const auto& s : builtin_scenarios())
                out << s.name << "\t" << s.description << "\n";
            return Exit::ok;
        }
        if (*dump) {
            out << serialize_scenario(load(dump_src));
            return Exit::ok;
        }
        if (*analyze) {
            const AnalyzeOutput res = run_analyze(load(an_src));
            emit(an_out, res.json, out);
            if (res.failed) {
                err << "analysis: endemic equilibrium solver did not converge\n";
                return Exit::non_convergence;
            }
            return Exit::ok;
        }
        if (*sim) {
            if (sim_plot && sim_out.empty())
                throw ValidationError("plot", "--plot needs --out");
            const Scenario base = load(sim_src);
            const std::string csv = run_simulate(base, merged(base, sim_ovr));
            emit(sim_out, csv, out);
            if (sim_plot)
                write_file(sim_out + ".gp", plot_script(sim_out, base.name));
            return Exit::ok;
        }
        if (*sw) {
            const Scenario loaded = load(sw_src);
            const Scenario base = apply(loaded, merged(loaded, sw_ovr));
            const SweepSpec spec{parse_sweep_axis(sw_axis), parse_grid(sw_grid)};
            const auto rows = run_sweep(base, spec);
            emit(sw_out, sweep_csv(rows), out);
            bool failed = false;
            for (const auto& r : rows) {
                if (!r.error.empty()) {
                    err << "sweep: " << to_string(spec.axis) << "=" << r.value << ": " << r.error
                        << "\n";
                    failed = true;
                }
            }
            return failed ? Exit::numerical : Exit::ok;
        }
    } catch (const NumericalBlowup& e) {
        err << "numerical failure at t=" << e.time() << ": " << e.what() << "\n";
        return Exit::numerical;
    } catch (const AnalysisNonConvergence& e) {
        err << "analysis did not converge: " << e.what() << "\n";
        return Exit::non_convergence;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return Exit::bad_input;
    } catch (const ConfigParseError& e) {
        err << "config parse error: " << e.what() << "\n";
        return Exit::bad_input;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return Exit::bad_input;
    } catch (const std::domain_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return Exit::bad_input;
    } catch (const std::out_of_range& e) {
        err << "invalid input: " << e.what() << "\n";
        return Exit::bad_input;
    }
    return Exit::bad_input;
}

} // namespace dsir
