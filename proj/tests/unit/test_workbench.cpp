#include "dsir/config.hpp"
#include "dsir/errors.hpp"
#include "dsir/workbench.hpp"

#include "support/schema_check.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dsir;

namespace {

const std::filesystem::path source_dir{DSIR_SOURCE_DIR};

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "dsir_test_workbench";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const char* minimal_config = R"({
  "format_version": 1,
  "name": "minimal",
  "params": {"inflow": 1.0, "contact_rate": 0.1, "vaccination_rate": 0.05, "death_rate": 0.1,
             "conversion_rate": 0.1, "treatment_rate": 0.2, "infected_death_rate": 0.1,
             "immunity_loss_rate": 0.3},
  "delays": {"vaccination": 1.0, "incidence": 2.0, "treatment": 0.5},
  "initial": {"x": 5.0, "y": 1.0, "z": 0.0},
  "t_end": 20.0
})";

Scenario minimal_scenario()
{
    Scenario s;
    s.name = "minimal";
    s.params = {1.0, 0.1, 0.05, 0.1, 0.1, 0.2, 0.1, 0.3};
    s.delays = {1.0, 2.0, 0.5};
    s.initial = {5.0, 1.0, 0.0};
    s.t_end = 20.0;
    return s;
}

// The huge population scale keeps the absolute equilibrium tolerance out of reach.
std::string non_convergent_config()
{
    nlohmann::json j = nlohmann::json::parse(minimal_config);
    const double a = 3.3e12;
    j["name"] = "huge";
    j["params"] = {{"inflow", a},         {"contact_rate", 1.3 / a},        {"vaccination_rate", 0.0},
                   {"death_rate", 1.1},   {"conversion_rate", 3.7 / a},     {"treatment_rate", 0.9},
                   {"infected_death_rate", 1.3}, {"immunity_loss_rate", 0.7}};
    j["initial"] = {{"x", a / 10}, {"y", a / 10}, {"z", a / 10}};
    return j.dump();
}

std::string blowup_config()
{
    nlohmann::json j = nlohmann::json::parse(minimal_config);
    j["name"] = "runaway";
    j["incidence"] = {{"kind", "power"}, {"c", 1.0}, {"p", 1.0}, {"q", 2.0}};
    j["params"]["conversion_rate"] = 5.0;
    j["t_end"] = 100.0;
    return j.dump();
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header)
{
    std::istringstream in(text);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');)
            row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("builtin scenarios")
{
    const auto all = builtin_scenarios();
    REQUIRE(all.size() == 3);
    CHECK(builtin_scenario("tamilnadu").params.treatment_rate == 0.1087);
    CHECK(builtin_scenario("india").initial == State{0.994, 0.0003813, 0.005569});
    CHECK(builtin_scenario("usa").params.conversion_rate == 0.462);
    CHECK(builtin_scenario("usa").functions.incidence.kind == IncidenceKind::saturated_in_x);
    CHECK(builtin_scenario("india").functions.treatment.kind == ResponseKind::saturating);
    for (const auto& s : all)
        CHECK_NOTHROW(validate(s));
    CHECK_THROWS_AS(builtin_scenario("atlantis"), ValidationError);
}

TEST_CASE("config round trip")
{
    for (const auto& s : builtin_scenarios()) {
        INFO(s.name);
        const Scenario back = load_scenario(serialize_scenario(s));
        CHECK(back == s);
        CHECK(serialize_scenario(back) == serialize_scenario(s));
    }
    Scenario tab = minimal_scenario();
    tab.history = dde::History::tabulated({-3.0, -1.0, 0.0}, {{4.0, 0.5, 0.0}, {4.5, 0.8, 0.0}, {5.0, 1.0, 0.0}});
    tab.functions.incidence = IncidenceSpec::power(0.5, 1.1, 0.9);
    tab.presets = {{"slow", {.eta = 4.0, .t_end = 30.0}}};
    tab.published.r0 = 1.5;
    CHECK(load_scenario(serialize_scenario(tab)) == tab);
}

TEST_CASE("shipped configs equal the builtins")
{
    for (const auto& s : builtin_scenarios()) {
        INFO(s.name);
        CHECK(load_scenario_file((source_dir / "configs" / (s.name + ".json")).string()) == s);
    }
}

TEST_CASE("minimal config")
{
    CHECK(load_scenario(minimal_config) == minimal_scenario());
}

TEST_CASE("config errors name the field")
{
    auto field_of = [](const std::string& text) {
        try {
            load_scenario(text);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("<no error>");
    };
    nlohmann::json j = nlohmann::json::parse(minimal_config);
    j["delays"]["incidence"] = -1.0;
    CHECK(field_of(j.dump()) == "delays.incidence");

    j = nlohmann::json::parse(minimal_config);
    j["params"]["gamma"] = 1.0;
    CHECK(field_of(j.dump()) == "params.gamma");

    j = nlohmann::json::parse(minimal_config);
    j.erase("t_end");
    CHECK(field_of(j.dump()) == "t_end");

    j = nlohmann::json::parse(minimal_config);
    j["t_end"] = 0.0;
    CHECK(field_of(j.dump()) == "t_end");

    j = nlohmann::json::parse(minimal_config);
    j["format_version"] = 2;
    CHECK(field_of(j.dump()) == "format_version");

    j = nlohmann::json::parse(minimal_config);
    j["treatment"] = {{"kind", "constant"}, {"k", 0.1}};
    CHECK(field_of(j.dump()) == "treatment.kind");
    j["allow_constant_functions"] = true;
    CHECK_NOTHROW(load_scenario(j.dump()));

    j = nlohmann::json::parse(minimal_config);
    j["incidence"] = {{"kind", "bilinear"}};
    CHECK(field_of(j.dump()) == "incidence.kind");
}

TEST_CASE("parse errors carry a location")
{
    const std::string broken = "{\n  \"format_version\": 1,\n  \"name\": oops\n}";
    try {
        load_scenario(broken);
        FAIL("expected a parse error");
    } catch (const ConfigParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(load_scenario_file("/nonexistent/dsir.json"), ConfigParseError);
}

TEST_CASE("trajectory CSV")
{
    const Scenario s = builtin_scenario("tamilnadu");
    const std::string a = run_simulate(s, {.eta = 5.0, .tau = 1.5, .delta = 1.2});
    const std::string b = run_simulate(s, {.eta = 5.0, .tau = 1.5, .delta = 1.2});
    CHECK(a == b);
    std::string header;
    const auto rows = parse_csv(a, header);
    CHECK(header == "t,x,y,z");
    CHECK(rows.size() == 501);
    CHECK(rows.back()[0] == 500.0);
    // Infected count eventually decreasing.
    for (std::size_t i = 400; i < rows.size(); ++i)
        CHECK(rows[i][2] <= rows[i - 1][2]);

    const auto odd = parse_csv(run_simulate(s, {.t_end = 10.0, .output_step = 0.3}), header);
    CHECK(odd.size() == static_cast<std::size_t>(std::floor(10.0 / 0.3)) + 1);

    CHECK_THROWS_AS(run_simulate(s, {.t_end = 0.0}), ValidationError);
    CHECK(output_grid(1.0, 0.1).size() == 11);
}

TEST_CASE("plot script names the CSV and all three columns")
{
    const std::string gp = plot_script("out/run.csv", "tamilnadu");
    CHECK(gp.find("out/run.csv") != std::string::npos);
    CHECK(gp.find("using 1:2") != std::string::npos);
    CHECK(gp.find("using 1:3") != std::string::npos);
    CHECK(gp.find("using 1:4") != std::string::npos);
}

TEST_CASE("sweeps")
{
    SUBCASE("longer incidence lag, higher peak")
    {
        const auto rows = run_sweep(builtin_scenario("tamilnadu"), {SweepAxis::tau, {1.5, 1.9, 6.0}});
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].peak_y <= rows[1].peak_y);
        CHECK(rows[1].peak_y <= rows[2].peak_y);
        for (const auto& r : rows)
            CHECK(r.error.empty());
    }
    SUBCASE("no treatment, disease prevails")
    {
        Scenario s = builtin_scenario("usa");
        s.params.vaccination_rate = 0.0;
        const auto rows = run_sweep(s, {SweepAxis::r, {0.0, 0.0686}});
        CHECK(rows[0].final_y > rows[1].final_y);
    }
    SUBCASE("single value equals a direct simulation")
    {
        const Scenario s = builtin_scenario("india");
        const auto rows = run_sweep(s, {SweepAxis::delta, {0.5}});
        REQUIRE(rows.size() == 1);
        std::string header;
        const auto csv = parse_csv(run_simulate(s, {.delta = 0.5}), header);
        double peak = -1.0, t_peak = 0.0;
        for (const auto& r : csv)
            if (r[2] > peak) {
                peak = r[2];
                t_peak = r[0];
            }
        CHECK(rows[0].value == 0.5);
        CHECK(rows[0].peak_y == doctest::Approx(peak).epsilon(1e-8));
        CHECK(rows[0].t_peak == t_peak);
        CHECK(rows[0].final_y == doctest::Approx(csv.back()[2]).epsilon(1e-8));
        CHECK(rows[0].final_z == doctest::Approx(csv.back()[3]).epsilon(1e-8));
    }
    SUBCASE("invalid grids")
    {
        const Scenario s = builtin_scenario("india");
        CHECK_THROWS_AS(run_sweep(s, {SweepAxis::tau, {}}), ValidationError);
        CHECK_THROWS_AS(run_sweep(s, {SweepAxis::tau, {1.0, -1.0}}), ValidationError);
    }
    SUBCASE("failed runs leave nan rows")
    {
        const Scenario s = load_scenario(blowup_config());
        const auto rows = run_sweep(s, {SweepAxis::tau, {0.5, 1.0}});
        REQUIRE(rows.size() == 2);
        CHECK_FALSE(rows[0].error.empty());
        CHECK(std::isnan(rows[0].peak_y));
        const std::string csv = sweep_csv(rows);
        CHECK(csv.rfind("value,peak_y,t_peak,final_y,final_z\n", 0) == 0);
        CHECK(csv.find("nan") != std::string::npos);
    }
    SUBCASE("sweeps are deterministic")
    {
        const Scenario s = builtin_scenario("tamilnadu");
        const SweepSpec spec{SweepAxis::c, {0.0, 0.0109, 0.05, 0.1}};
        CHECK(sweep_csv(run_sweep(s, spec)) == sweep_csv(run_sweep(s, spec)));
    }
}

TEST_CASE("analysis reports conform to the documented schema")
{
    const support::SchemaCheck check(nlohmann::json::parse(slurp(source_dir / "docs" / "report.schema.json")));
    for (auto s : builtin_scenarios())
        for (auto dfe : {DfeMode::full_dfe, DfeMode::paper_compat})
            for (auto fm : {FormulaMode::derivation, FormulaMode::strict_paper}) {
                s.dfe_mode = dfe;
                s.formula_mode = fm;
                const auto out = run_analyze(s);
                const auto errs = check.errors(nlohmann::json::parse(out.json));
                std::string joined;
                for (const auto& e : errs)
                    joined += e + "; ";
                INFO(s.name << " " << to_string(dfe) << " " << to_string(fm) << ": " << joined);
                CHECK(errs.empty());
                CHECK_FALSE(out.failed);
            }

    const auto failed = run_analyze(load_scenario(non_convergent_config()));
    CHECK(failed.failed);
    const auto doc = nlohmann::json::parse(failed.json);
    CHECK(check.errors(doc).empty());
    CHECK(doc["endemic"]["status"] == "failed");

    // The checker itself rejects a broken document.
    auto broken = nlohmann::json::parse(run_analyze(builtin_scenario("usa")).json);
    broken["r0"].erase("value");
    broken["extra"] = 1;
    CHECK(check.errors(broken).size() == 2);
}

TEST_CASE("report key order and values")
{
    Scenario s = builtin_scenario("india");
    s.dfe_mode = DfeMode::paper_compat;
    const auto doc = nlohmann::ordered_json::parse(run_analyze(s).json);
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items())
        keys.push_back(k);
    const std::vector<std::string> expect{"format_version", "scenario", "r0", "dfe", "endemic",
                                          "contraction", "local_dfe", "local_endemic",
                                          "global_independent", "delay_ranges", "flags", "lipschitz",
                                          "boundedness"};
    CHECK(keys == expect);
    CHECK(doc["r0"]["value"].get<double>() == doctest::Approx(11.4545).epsilon(1e-3));

    s = builtin_scenario("tamilnadu");
    s.params.conversion_rate = 0.0;
    CHECK(nlohmann::json::parse(run_analyze(s).json)["r0"]["value"].get<double>() == 0.0);
    CHECK(nlohmann::json::parse(run_analyze(builtin_scenario("tamilnadu")).json)["delay_ranges"]
              ["published_comparison"]
                  .size() == 3);
}

TEST_CASE("command line exit codes")
{
    SUBCASE("0: success")
    {
        const auto list = cli({"scenarios"});
        CHECK(list.code == 0);
        CHECK(list.out.find("tamilnadu") != std::string::npos);
        CHECK(list.out.find("india") != std::string::npos);
        CHECK(list.out.find("usa") != std::string::npos);

        const auto an = cli({"analyze", "--scenario", "india", "--compat"});
        CHECK(an.code == 0);
        CHECK(nlohmann::json::parse(an.out)["r0"]["mode"] == "paper_compat");

        const auto sim = cli({"simulate", "--scenario", "tamilnadu", "--preset", "fig3", "--t-end", "50"});
        CHECK(sim.code == 0);
        CHECK(sim.out.rfind("t,x,y,z\n", 0) == 0);

        const auto csv = scratch("run.csv");
        const auto plotted = cli({"simulate", "--scenario", "usa", "--t-end", "20", "--out", csv.string(), "--plot"});
        CHECK(plotted.code == 0);
        CHECK(std::filesystem::exists(csv.string() + ".gp"));

        const auto sw = cli({"sweep", "--scenario", "tamilnadu", "--axis", "tau", "--grid", "1.5,1.9"});
        CHECK(sw.code == 0);
        CHECK(sw.out.rfind("value,peak_y,t_peak,final_y,final_z\n", 0) == 0);

        const auto cfg = scratch("minimal.json");
        write(cfg, minimal_config);
        CHECK(cli({"analyze", "--config", cfg.string(), "--strict-paper"}).code == 0);
        CHECK(cli({"dump", "--config", cfg.string()}).out == serialize_scenario(minimal_scenario()));
    }
    SUBCASE("2: bad input")
    {
        CHECK(cli({"simulate", "--scenario", "usa", "--t-end", "-1"}).code == 2);
        CHECK(cli({"simulate", "--scenario", "atlantis"}).code == 2);
        CHECK(cli({"simulate", "--scenario", "usa", "--preset", "fig99"}).code == 2);
        CHECK(cli({"analyze"}).code == 2);
        CHECK(cli({"analyze", "--scenario", "usa", "--config", "x.json"}).code == 2);
        CHECK(cli({"frobnicate"}).code == 2);
        CHECK(cli({"sweep", "--scenario", "usa", "--axis", "gamma", "--grid", "1"}).code == 2);
        CHECK(cli({"sweep", "--scenario", "usa", "--axis", "tau", "--grid", "1,x"}).code == 2);
        CHECK(cli({"simulate", "--scenario", "usa", "--plot"}).code == 2);
        const auto cfg = scratch("broken.json");
        write(cfg, "{ \"format_version\": 1,\n  \"name\": }");
        const auto res = cli({"analyze", "--config", cfg.string()});
        CHECK(res.code == 2);
        CHECK(res.err.find("line 2") != std::string::npos);
    }
    SUBCASE("3: numerical failure")
    {
        const auto cfg = scratch("runaway.json");
        write(cfg, blowup_config());
        const auto sim = cli({"simulate", "--config", cfg.string()});
        CHECK(sim.code == 3);
        CHECK(sim.err.find("t=") != std::string::npos);
        CHECK(cli({"sweep", "--config", cfg.string(), "--axis", "tau", "--grid", "0.5"}).code == 3);
    }
    SUBCASE("4: analysis non-convergence")
    {
        const auto cfg = scratch("huge.json");
        write(cfg, non_convergent_config());
        const auto res = cli({"analyze", "--config", cfg.string()});
        CHECK(res.code == 4);
        CHECK(nlohmann::json::parse(res.out)["endemic"]["status"] == "failed");
    }
}
