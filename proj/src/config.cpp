#include "dsir/config.hpp"

#include "dsir/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace dsir {
namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string join(const std::string& parent, std::string_view key)
{
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

// Object view that tracks the dotted path for error messages.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ValidationError(path_.empty() ? "document" : path_, "expected an object");
    }

    void allow_only(std::initializer_list<std::string_view> keys) const
    {
        for (const auto& [k, v] : j_.items())
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                throw ValidationError(join(path_, k), "unknown key");
    }

    bool has(std::string_view key) const { return j_.contains(key); }

    const json& raw(std::string_view key) const
    {
        if (!has(key))
            throw ValidationError(join(path_, key), "required key is missing");
        return j_.at(key);
    }

    Node child(std::string_view key) const { return {raw(key), join(path_, key)}; }

    double number(std::string_view key) const
    {
        const json& v = raw(key);
        if (!v.is_number())
            throw ValidationError(join(path_, key), "expected a number");
        return v.get<double>();
    }

    double number_or(std::string_view key, double fallback) const
    {
        return has(key) ? number(key) : fallback;
    }

    std::optional<double> maybe_number(std::string_view key) const
    {
        if (!has(key))
            return std::nullopt;
        return number(key);
    }

    long long integer(std::string_view key) const
    {
        const json& v = raw(key);
        if (!v.is_number_integer())
            throw ValidationError(join(path_, key), "expected an integer");
        return v.get<long long>();
    }

    std::string text(std::string_view key) const
    {
        const json& v = raw(key);
        if (!v.is_string())
            throw ValidationError(join(path_, key), "expected a string");
        return v.get<std::string>();
    }

    bool flag(std::string_view key) const
    {
        const json& v = raw(key);
        if (!v.is_boolean())
            throw ValidationError(join(path_, key), "expected true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(std::string_view key) const
    {
        const json& v = raw(key);
        const std::string p = join(path_, key);
        if (!v.is_array())
            throw ValidationError(p, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number())
                throw ValidationError(p, "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
};

template <typename Fn>
auto with_field(const std::string& field, Fn&& fn)
{
    try {
        return fn();
    } catch (const ValidationError& e) {
        std::string what = e.what();
        const std::string prefix = e.field() + ": ";
        if (what.starts_with(prefix))
            what.erase(0, prefix.size());
        throw ValidationError(field, what);
    }
}

IncidenceSpec read_incidence(const Node& n)
{
    const auto kind = with_field(join(n.path(), "kind"), [&] { return parse_incidence_kind(n.text("kind")); });
    IncidenceSpec f;
    f.kind = kind;
    switch (kind) {
    case IncidenceKind::mass_action:
        n.allow_only({"kind"});
        break;
    case IncidenceKind::power:
        n.allow_only({"kind", "c", "p", "q"});
        f.c_pow = n.number("c");
        f.p_exp = n.number("p");
        f.q_exp = n.number("q");
        break;
    case IncidenceKind::saturated_in_x:
        n.allow_only({"kind", "b"});
        f.b_sat = n.number("b");
        break;
    case IncidenceKind::saturated_in_y:
        n.allow_only({"kind", "a"});
        f.a_sat = n.number("a");
        break;
    }
    return f;
}

template <typename Spec>
Spec read_response(const Node& n)
{
    Spec s;
    s.kind = with_field(join(n.path(), "kind"), [&] { return parse_response_kind(n.text("kind")); });
    if (s.kind == ResponseKind::constant) {
        n.allow_only({"kind", "k"});
        s.k_const = n.number("k");
    } else if (s.kind == ResponseKind::saturating) {
        n.allow_only({"kind", "a"});
        s.a_sat = n.number("a");
    } else {
        n.allow_only({"kind"});
    }
    return s;
}

dde::History read_history(const Node& n)
{
    const std::string mode = n.text("mode");
    if (mode == "constant") {
        n.allow_only({"mode", "value"});
        const auto v = n.numbers("value");
        if (v.size() != 3)
            throw ValidationError(join(n.path(), "value"), "expected [x, y, z]");
        return dde::History::constant(v);
    }
    if (mode != "tabulated")
        throw ValidationError(join(n.path(), "mode"), "expected constant or tabulated");
    n.allow_only({"mode", "points"});
    const json& pts = n.raw("points");
    const std::string field = join(n.path(), "points");
    if (!pts.is_array() || pts.size() < 2)
        throw ValidationError(field, "expected at least two [t, x, y, z] rows");
    std::vector<double> times;
    std::vector<dde::Vector> states;
    for (const auto& row : pts) {
        if (!row.is_array() || row.size() != 4 ||
            !std::all_of(row.begin(), row.end(), [](const json& e) { return e.is_number(); }))
            throw ValidationError(field, "each row must be [t, x, y, z]");
        times.push_back(row[0].get<double>());
        states.push_back({row[1].get<double>(), row[2].get<double>(), row[3].get<double>()});
    }
    try {
        return dde::History::tabulated(std::move(times), std::move(states));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(field, e.what());
    }
}

Overrides read_overrides(const Node& n)
{
    Overrides o;
    o.eta = n.maybe_number("eta");
    o.tau = n.maybe_number("tau");
    o.delta = n.maybe_number("delta");
    o.r = n.maybe_number("r");
    o.c = n.maybe_number("c");
    o.t_end = n.maybe_number("t_end");
    o.output_step = n.maybe_number("output_step");
    return o;
}

Scenario from_json(const json& doc)
{
    const Node root(doc, "");
    root.allow_only({"format_version", "name", "description", "params", "incidence", "vaccination",
                     "treatment", "allow_constant_functions", "delays", "initial", "history",
                     "t_end", "output_step", "integrator", "lipschitz_box", "dfe_mode",
                     "formula_mode", "presets", "published"});
    if (root.integer("format_version") != config_format_version)
        throw ValidationError("format_version",
                              "unsupported version (expected " +
                                  std::to_string(config_format_version) + ")");
    Scenario s;
    s.name = root.text("name");
    if (root.has("description"))
        s.description = root.text("description");

    const Node p = root.child("params");
    p.allow_only({"inflow", "contact_rate", "vaccination_rate", "death_rate", "conversion_rate",
                  "treatment_rate", "infected_death_rate", "immunity_loss_rate"});
    s.params = {p.number("inflow"),          p.number("contact_rate"),
                p.number("vaccination_rate"), p.number("death_rate"),
                p.number("conversion_rate"),  p.number("treatment_rate"),
                p.number("infected_death_rate"), p.number("immunity_loss_rate")};

    if (root.has("incidence"))
        s.functions.incidence = read_incidence(root.child("incidence"));
    if (root.has("vaccination"))
        s.functions.vaccination = read_response<VaccinationSpec>(root.child("vaccination"));
    if (root.has("treatment"))
        s.functions.treatment = read_response<TreatmentSpec>(root.child("treatment"));
    if (root.has("allow_constant_functions"))
        s.allow_constant_functions = root.flag("allow_constant_functions");

    const Node d = root.child("delays");
    d.allow_only({"vaccination", "incidence", "treatment"});
    s.delays = {d.number("vaccination"), d.number("incidence"), d.number("treatment")};

    const Node i = root.child("initial");
    i.allow_only({"x", "y", "z"});
    s.initial = {i.number("x"), i.number("y"), i.number("z")};

    if (root.has("history"))
        s.history = read_history(root.child("history"));
    s.t_end = root.number("t_end");
    s.output_step = root.number_or("output_step", s.output_step);

    if (root.has("integrator")) {
        const Node g = root.child("integrator");
        g.allow_only({"h", "breakpoint_depth", "max_steps"});
        s.integrator.h = g.number_or("h", s.integrator.h);
        if (g.has("breakpoint_depth"))
            s.integrator.breakpoint_depth = static_cast<int>(g.integer("breakpoint_depth"));
        if (g.has("max_steps")) {
            const long long m = g.integer("max_steps");
            if (m <= 0)
                throw ValidationError("integrator.max_steps", "must be > 0");
            s.integrator.max_steps = static_cast<std::size_t>(m);
        }
    }
    if (root.has("lipschitz_box")) {
        const Node b = root.child("lipschitz_box");
        b.allow_only({"x_min", "x_max", "y_min", "y_max"});
        s.lipschitz_box = {b.number("x_min"), b.number("x_max"), b.number("y_min"),
                           b.number("y_max")};
    }
    if (root.has("dfe_mode"))
        s.dfe_mode = parse_dfe_mode(root.text("dfe_mode"));
    if (root.has("formula_mode"))
        s.formula_mode = parse_formula_mode(root.text("formula_mode"));

    if (root.has("presets")) {
        const json& arr = root.raw("presets");
        if (!arr.is_array())
            throw ValidationError("presets", "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const Node e(arr[k], "presets[" + std::to_string(k) + "]");
            e.allow_only({"name", "eta", "tau", "delta", "r", "c", "t_end", "output_step"});
            s.presets.push_back({e.text("name"), read_overrides(e)});
        }
    }
    if (root.has("published")) {
        const Node pub = root.child("published");
        pub.allow_only({"r0", "eta_max", "tau_max", "delta_max"});
        s.published.r0 = pub.maybe_number("r0");
        if (pub.has("eta_max"))
            s.published.eta_max = pub.numbers("eta_max");
        if (pub.has("tau_max"))
            s.published.tau_max = pub.numbers("tau_max");
        if (pub.has("delta_max"))
            s.published.delta_max = pub.numbers("delta_max");
    }

    validate(s);
    return s;
}

std::string location_of(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ordered response_json(ResponseKind kind, double k, double a)
{
    ordered o;
    o["kind"] = to_string(kind);
    if (kind == ResponseKind::constant)
        o["k"] = k;
    else if (kind == ResponseKind::saturating)
        o["a"] = a;
    return o;
}

void put_overrides(ordered& o, const Overrides& v)
{
    auto put = [&](const char* key, const std::optional<double>& u) {
        if (u)
            o[key] = *u;
    };
    put("eta", v.eta);
    put("tau", v.tau);
    put("delta", v.delta);
    put("r", v.r);
    put("c", v.c);
    put("t_end", v.t_end);
    put("output_step", v.output_step);
}

} // namespace

Scenario load_scenario(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is one past the offending character.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        if (const auto pos = what.find("; "); pos != std::string::npos)
            what = what.substr(pos + 2);
        throw ConfigParseError(location_of(text, at), what);
    }
    return from_json(doc);
}

Scenario load_scenario_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigParseError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_scenario(buf.str());
    } catch (const ConfigParseError& e) {
        throw ConfigParseError(path + ": " + e.location(), e.what());
    }
}

std::string serialize_scenario(const Scenario& s)
{
    ordered o;
    o["format_version"] = config_format_version;
    o["name"] = s.name;
    if (!s.description.empty())
        o["description"] = s.description;
    const ModelParams& k = s.params;
    o["params"] = {{"inflow", k.inflow},
                   {"contact_rate", k.contact_rate},
                   {"vaccination_rate", k.vaccination_rate},
                   {"death_rate", k.death_rate},
                   {"conversion_rate", k.conversion_rate},
                   {"treatment_rate", k.treatment_rate},
                   {"infected_death_rate", k.infected_death_rate},
                   {"immunity_loss_rate", k.immunity_loss_rate}};

    const IncidenceSpec& f = s.functions.incidence;
    ordered inc;
    inc["kind"] = to_string(f.kind);
    if (f.kind == IncidenceKind::power) {
        inc["c"] = f.c_pow;
        inc["p"] = f.p_exp;
        inc["q"] = f.q_exp;
    } else if (f.kind == IncidenceKind::saturated_in_x) {
        inc["b"] = f.b_sat;
    } else if (f.kind == IncidenceKind::saturated_in_y) {
        inc["a"] = f.a_sat;
    }
    o["incidence"] = inc;
    const auto& v = s.functions.vaccination;
    const auto& p = s.functions.treatment;
    o["vaccination"] = response_json(v.kind, v.k_const, v.a_sat);
    o["treatment"] = response_json(p.kind, p.k_const, p.a_sat);
    if (s.allow_constant_functions)
        o["allow_constant_functions"] = true;

    o["delays"] = {{"vaccination", s.delays.vaccination},
                   {"incidence", s.delays.incidence},
                   {"treatment", s.delays.treatment}};
    o["initial"] = {{"x", s.initial.x}, {"y", s.initial.y}, {"z", s.initial.z}};
    if (s.history) {
        ordered h;
        if (s.history->is_constant()) {
            h["mode"] = "constant";
            h["value"] = s.history->constant_value();
        } else {
            h["mode"] = "tabulated";
            ordered pts = ordered::array();
            const auto& ts = s.history->times();
            for (std::size_t r = 0; r < ts.size(); ++r) {
                const auto& st = s.history->states()[r];
                pts.push_back({ts[r], st[0], st[1], st[2]});
            }
            h["points"] = pts;
        }
        o["history"] = h;
    }
    o["t_end"] = s.t_end;
    o["output_step"] = s.output_step;
    o["integrator"] = {{"h", s.integrator.h},
                       {"breakpoint_depth", s.integrator.breakpoint_depth},
                       {"max_steps", s.integrator.max_steps}};
    o["lipschitz_box"] = {{"x_min", s.lipschitz_box.x_min},
                          {"x_max", s.lipschitz_box.x_max},
                          {"y_min", s.lipschitz_box.y_min},
                          {"y_max", s.lipschitz_box.y_max}};
    o["dfe_mode"] = to_string(s.dfe_mode);
    o["formula_mode"] = to_string(s.formula_mode);
    if (!s.presets.empty()) {
        ordered arr = ordered::array();
        for (const auto& pr : s.presets) {
            ordered e;
            e["name"] = pr.name;
            put_overrides(e, pr.values);
            arr.push_back(e);
        }
        o["presets"] = arr;
    }
    if (!s.published.empty()) {
        ordered pub;
        if (s.published.r0)
            pub["r0"] = *s.published.r0;
        if (!s.published.eta_max.empty())
            pub["eta_max"] = s.published.eta_max;
        if (!s.published.tau_max.empty())
            pub["tau_max"] = s.published.tau_max;
        if (!s.published.delta_max.empty())
            pub["delta_max"] = s.published.delta_max;
        o["published"] = pub;
    }
    return o.dump(2) + "\n";
}

} // namespace dsir
