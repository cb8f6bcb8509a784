#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace epsnet::cli {

json Defaults::to_json() const {
    json tol_j = {{"slope_tol", tol.slope_tol}, {"abs_floor", tol.abs_floor}, {"m_max", tol.m_max}, {"n_max", tol.n_max}};
    return {{"version", version},
            {"grid", {{"base", grid.base}, {"kmin", grid.k_min}, {"kmax", grid.k_max}}},
            {"lambdas", lambdas},
            {"m", m},
            {"M", M},
            {"tolerances", tol_j},
            {"assoc_tol", assoc_tol},
            {"pairing_kmax", pairing_kmax},
            {"zerodiv_budget", zerodiv_budget},
            {"tempered_radii", tempered_radii}};
}

const Defaults& defaults() {
    static const Defaults d;
    return d;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{
        "classify",        "equal",          "eval-point",       "order",          "embed",
        "integrate",       "pair",           "associate",        "homog-strong",   "homog-weak",
        "homog-assoc",     "euler-strong",   "euler-assoc",      "invariance-scale", "invariance-translate",
        "radial",          "extend",         "tempered",         "coeffs",         "zerodiv",
        "mollifier-info"};
    return names;
}

SchemaError::SchemaError(std::string pointer, const std::string& message)
    : Error((pointer.empty() ? std::string("/") : pointer) + ": " + message), pointer_(std::move(pointer)) {}

namespace {

std::string escape(const std::string& key) {
    std::string s;
    for (char c : key) {
        if (c == '~')
            s += "~0";
        else if (c == '/')
            s += "~1";
        else
            s += c;
    }
    return s;
}

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + escape(key); }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) { throw SchemaError(ptr, msg); }

std::string syntax(const ParseError& e) {
    std::string msg = e.what();
    const std::string tail = " at offset " + std::to_string(e.offset());
    if (msg.size() >= tail.size() && msg.compare(msg.size() - tail.size(), tail.size(), tail) == 0) msg.resize(msg.size() - tail.size());
    return "syntax error at offset " + std::to_string(e.offset()) + ": " + msg;
}

void object(const json& v, const std::string& ptr) {
    if (!v.is_object()) fail(ptr, "expected an object");
}

void allowed(const json& v, const std::string& ptr, std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : v.items())
        if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) fail(at(ptr, k), "unknown key");
}

double number(const json& v, const std::string& ptr) {
    if (!v.is_number()) fail(ptr, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ptr, "expected a finite number");
    return d;
}

int integer(const json& v, const std::string& ptr) {
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    return v.get<int>();
}

std::string string(const json& v, const std::string& ptr) {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& ptr, std::size_t min_size = 1) {
    if (!v.is_array() || v.size() < min_size) fail(ptr, "expected an array of at least " + std::to_string(min_size) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], at(ptr, i)));
    return out;
}

std::pair<double, double> bounds(const json& v, const std::string& ptr) {
    const auto b = numbers(v, ptr, 2);
    if (b.size() != 2) fail(ptr, "expected [lo, hi]");
    return {b[0], b[1]};
}

// Expression text with syntax errors reported at the pointer.
Expr expression(const json& v, const std::string& ptr, int dim) {
    const std::string text = string(v, ptr);
    try {
        return parse(text, dim);
    } catch (const ParseError& e) {
        fail(ptr, syntax(e));
    }
}

EpsGrid build_grid(const json& doc, const RunOptions& opt) {
    EpsGrid g = defaults().grid;
    if (doc.contains("grid")) {
        const json& v = doc["grid"];
        object(v, "/grid");
        allowed(v, "/grid", {"base", "kmin", "kmax"});
        if (v.contains("base")) g.base = number(v["base"], "/grid/base");
        if (v.contains("kmin")) g.k_min = integer(v["kmin"], "/grid/kmin");
        if (v.contains("kmax")) g.k_max = integer(v["kmax"], "/grid/kmax");
    }
    if (opt.grid_kmin) g.k_min = *opt.grid_kmin;
    if (opt.grid_kmax) g.k_max = *opt.grid_kmax;
    try {
        g.validate();
    } catch (const Error& e) {
        fail("/grid", e.what());
    }
    return g;
}

int build_moments(const json& doc, const RunOptions& opt) {
    int M = defaults().M;
    if (doc.contains("mollifier")) {
        const json& v = doc["mollifier"];
        object(v, "/mollifier");
        allowed(v, "/mollifier", {"M"});
        if (v.contains("M")) M = integer(v["M"], "/mollifier/M");
    }
    if (opt.moments) M = *opt.moments;
    if (M < 0 || M > 12 || M % 2) fail("/mollifier/M", "the moment order must be even and lie in 0..12");
    return M;
}

CompactSet build_compact(const json& v, const std::string& ptr) {
    object(v, ptr);
    allowed(v, ptr, {"interval", "cube", "box", "annulus", "dim", "samples"});
    int kinds = 0;
    for (const char* k : {"interval", "cube", "box", "annulus"}) kinds += v.contains(k);
    if (kinds != 1) fail(ptr, "exactly one of interval, cube, box, annulus is required");
    const int dim = v.contains("dim") ? integer(v["dim"], at(ptr, "dim")) : 1;
    if (dim < 1 || dim > 9) fail(at(ptr, "dim"), "dimension must lie in 1..9");
    const int samples = v.contains("samples") ? integer(v["samples"], at(ptr, "samples")) : 0;
    CompactSet K;
    try {
        if (v.contains("interval")) {
            const auto [lo, hi] = bounds(v["interval"], at(ptr, "interval"));
            K = CompactSet::interval(lo, hi, samples);
        } else if (v.contains("cube")) {
            const auto [lo, hi] = bounds(v["cube"], at(ptr, "cube"));
            K = CompactSet::cube(dim, lo, hi, samples);
        } else if (v.contains("box")) {
            const json& b = v["box"];
            if (!b.is_array() || b.empty()) fail(at(ptr, "box"), "expected an array of [lo, hi] pairs");
            K.dim = static_cast<int>(b.size());
            K.samples = samples;
            for (std::size_t i = 0; i < b.size(); ++i) K.box.push_back(bounds(b[i], at(at(ptr, "box"), i)));
        } else {
            const auto [rin, rout] = bounds(v["annulus"], at(ptr, "annulus"));
            K = CompactSet::annulus(dim, rin, rout, samples);
        }
        K.validate();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        fail(ptr, e.what());
    }
    return K;
}

TestFunction build_testfn(const json& v, const std::string& ptr) {
    object(v, ptr);
    allowed(v, ptr, {"center", "radius", "q"});
    if (!v.contains("center")) fail(at(ptr, "center"), "missing");
    if (!v.contains("radius")) fail(at(ptr, "radius"), "missing");
    auto c = numbers(v["center"], at(ptr, "center"));
    const double r = number(v["radius"], at(ptr, "radius"));
    const int d = static_cast<int>(c.size());
    Expr q;
    if (v.contains("q")) q = expression(v["q"], at(ptr, "q"), d);
    try {
        return TestFunction::make(std::move(c), r, q);
    } catch (const Error& e) {
        fail(ptr, e.what());
    }
}

// Levels named by an override key: an integer, "even" or "odd".
std::vector<int> override_levels(const std::string& key, const EpsGrid& g, const std::string& ptr) {
    std::vector<int> out;
    if (key == "even" || key == "odd") {
        for (int k = g.k_min; k <= g.k_max; ++k)
            if ((k % 2 == 0) == (key == "even")) out.push_back(k);
        return out;
    }
    std::size_t used = 0;
    int k = 0;
    try {
        k = std::stoi(key, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != key.size() || key.empty()) fail(ptr, "override keys are grid levels, \"even\" or \"odd\"");
    out.push_back(k);
    return out;
}

Net build_net(const json& v, const std::string& ptr, Scenario& s) {
    object(v, ptr);
    allowed(v, ptr, {"expr", "embed", "dim", "domain", "overrides", "note"});
    if (v.contains("expr") == v.contains("embed")) fail(ptr, "exactly one of expr, embed is required");
    auto kernel = [&]() {
        if (!s.rho) s.rho = Mollifier::build(s.M);
        return s.rho;
    };
    Net n;
    if (v.contains("embed")) {
        const std::string text = string(v["embed"], at(ptr, "embed"));
        try {
            n = embed(DistributionSpec::parse(text), kernel());
        } catch (const ParseError& e) {
            fail(at(ptr, "embed"), syntax(e));
        } catch (const PreconditionViolated& e) {
            fail(at(ptr, "embed"), e.what());
        }
        if (v.contains("dim") && integer(v["dim"], at(ptr, "dim")) != n.dim()) fail(at(ptr, "dim"), "differs from the embedded spec");
    } else {
        const int dim = v.contains("dim") ? integer(v["dim"], at(ptr, "dim")) : 1;
        if (dim < 1 || dim > 9) fail(at(ptr, "dim"), "dimension must lie in 1..9");
        const Expr e = expression(v["expr"], at(ptr, "expr"), dim);
        n = Net(e, dim);
    }
    if (v.contains("overrides")) {
        const std::string op = at(ptr, "overrides");
        object(v["overrides"], op);
        for (const auto& [key, text] : v["overrides"].items()) {
            const Expr e = expression(text, at(op, key), n.dim());
            for (int k : override_levels(key, s.grid, at(op, key))) n.set_override(k, e);
        }
    }
    bool needs_kernel = n.base().uses_kernel();
    for (const auto& [k, e] : n.overrides()) needs_kernel = needs_kernel || e.uses_kernel();
    if (needs_kernel && !n.kernel()) n.set_kernel(kernel());
    if (v.contains("domain")) {
        const std::string d = string(v["domain"], at(ptr, "domain"));
        if (d == "pierced")
            n.set_domain(Domain::pierced());
        else if (d != "whole")
            fail(at(ptr, "domain"), "expected \"whole\" or \"pierced\"");
    }
    if (v.contains("note")) n.note(string(v["note"], at(ptr, "note")));
    return n;
}

struct Field {
    enum Type { Net, Net2, Number, Integer, Text, GenNum, Numbers, Shifts, Compacts, Compact, Testfns, Bool, Values, Ints };
    const char* name;
    Type type;
};

// Fields accepted per check; "id", "check" and "expect" are always allowed.
const std::map<std::string, std::vector<Field>>& check_fields() {
    using F = Field;
    static const std::map<std::string, std::vector<Field>> m{
        {"classify", {{"net", F::Net}, {"compacts", F::Compacts}, {"deriv", F::Ints}}},
        {"equal", {{"net", F::Net}, {"net2", F::Net2}, {"compacts", F::Compacts}, {"m", F::Number}, {"max_order", F::Integer}}},
        {"eval-point", {{"net", F::Net}, {"at", F::Values}, {"container", F::Compact}}},
        {"order", {{"number", F::GenNum}, {"relation", F::Text}, {"m", F::Number}}},
        {"embed", {{"net", F::Net}}},
        {"integrate", {{"net", F::Net}, {"a", F::GenNum}, {"b", F::GenNum}, {"m", F::Number}}},
        {"pair", {{"net", F::Net}, {"testfns", F::Testfns}}},
        {"associate", {{"net", F::Net}, {"testfns", F::Testfns}}},
        {"homog-strong", {{"net", F::Net}, {"alpha", F::Number}, {"lambdas", F::Numbers}, {"m", F::Number}, {"compacts", F::Compacts}}},
        {"homog-weak", {{"net", F::Net}, {"alpha", F::Number}, {"lambdas", F::Numbers}, {"m", F::Number}, {"testfns", F::Testfns}}},
        {"homog-assoc", {{"net", F::Net}, {"alpha", F::Number}, {"lambdas", F::Numbers}, {"testfns", F::Testfns}}},
        {"euler-strong", {{"net", F::Net}, {"alpha", F::Number}, {"m", F::Number}, {"compacts", F::Compacts}}},
        {"euler-assoc", {{"net", F::Net}, {"alpha", F::Number}, {"testfns", F::Testfns}}},
        {"invariance-scale", {{"net", F::Net}, {"lambdas", F::Numbers}, {"m", F::Number}, {"compacts", F::Compacts}}},
        {"invariance-translate", {{"net", F::Net}, {"shifts", F::Shifts}, {"m", F::Number}, {"compacts", F::Compacts}}},
        {"radial", {{"net", F::Net}, {"alpha", F::Number}, {"m", F::Number}, {"compacts", F::Compacts}}},
        {"extend", {{"net", F::Net}, {"alpha", F::Number}, {"restrict", F::Compact}, {"m", F::Number}}},
        {"tempered", {{"net", F::Net}, {"N", F::Number}, {"radii", F::Numbers}, {"max_order", F::Integer}, {"represent", F::Bool}, {"alpha", F::Number}}},
        {"coeffs", {{"net", F::Net}, {"k", F::Integer}, {"m", F::Number}, {"compacts", F::Compacts}}},
        {"zerodiv", {{"net", F::Net}, {"compacts", F::Compacts}, {"rho", F::Number}, {"budget", F::Integer}}},
        {"mollifier-info", {}},
    };
    return m;
}

// Fields a check cannot run without.
const std::map<std::string, std::vector<std::string>>& required_fields() {
    static const std::map<std::string, std::vector<std::string>> m{
        {"classify", {"net"}},      {"equal", {"net", "net2"}},     {"eval-point", {"net", "at"}},
        {"order", {"number"}},      {"embed", {"net"}},             {"integrate", {"net", "a", "b"}},
        {"pair", {"net", "testfns"}}, {"associate", {"net", "testfns"}}, {"homog-strong", {"net", "alpha"}},
        {"homog-weak", {"net", "alpha"}}, {"homog-assoc", {"net", "alpha"}}, {"euler-strong", {"net", "alpha"}},
        {"euler-assoc", {"net", "alpha"}}, {"invariance-scale", {"net"}}, {"invariance-translate", {"net"}},
        {"radial", {"net", "alpha"}}, {"extend", {"net", "alpha"}}, {"tempered", {"net", "N"}},
        {"coeffs", {"net", "k"}},   {"zerodiv", {"net"}},           {"mollifier-info", {}},
    };
    return m;
}

void validate_check(const json& c, const std::string& ptr, const Scenario& s) {
    object(c, ptr);
    if (!c.contains("check")) fail(at(ptr, "check"), "missing");
    const std::string name = string(c["check"], at(ptr, "check"));
    const auto it = check_fields().find(name);
    if (it == check_fields().end()) fail(at(ptr, "check"), "unknown check '" + name + "'");
    for (const auto& [key, v] : c.items()) {
        const std::string p = at(ptr, key);
        if (key == "check") continue;
        if (key == "id") {
            string(v, p);
            continue;
        }
        if (key == "expect") {
            const std::string e = string(v, p);
            if (e != "pass" && e != "fail") fail(p, "expected \"pass\" or \"fail\"");
            continue;
        }
        const auto f = std::find_if(it->second.begin(), it->second.end(), [&](const Field& x) { return key == x.name; });
        if (f == it->second.end()) fail(p, "not a parameter of " + name);
        switch (f->type) {
            case Field::Net:
            case Field::Net2:
                if (!s.nets.count(string(v, p))) fail(p, "undefined net '" + v.get<std::string>() + "'");
                break;
            case Field::Number: number(v, p); break;
            case Field::Integer: integer(v, p); break;
            case Field::Text: string(v, p); break;
            case Field::GenNum: detail::gen_number(v, p, s.grid); break;
            case Field::Numbers: numbers(v, p); break;
            case Field::Ints:
                if (!v.is_array()) fail(p, "expected an array of integers");
                for (std::size_t i = 0; i < v.size(); ++i) integer(v[i], at(p, i));
                break;
            case Field::Shifts:
                if (!v.is_array() || v.empty()) fail(p, "expected an array of shift vectors");
                for (std::size_t i = 0; i < v.size(); ++i) numbers(v[i], at(p, i));
                break;
            case Field::Compacts:
            case Field::Testfns: {
                if (!v.is_array() || v.empty()) fail(p, "expected a nonempty array of names");
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const std::string n = string(v[i], at(p, i));
                    const bool ok = f->type == Field::Compacts ? s.compacts.count(n) > 0 : s.testfns.count(n) > 0;
                    if (!ok) fail(at(p, i), std::string("undefined ") + (f->type == Field::Compacts ? "compact set" : "test function") + " '" + n + "'");
                }
                break;
            }
            case Field::Compact:
                if (!s.compacts.count(string(v, p))) fail(p, "undefined compact set '" + v.get<std::string>() + "'");
                break;
            case Field::Bool:
                if (!v.is_boolean()) fail(p, "expected true or false");
                break;
            case Field::Values:
                if (!v.is_array() || v.empty()) fail(p, "expected an array of coordinates");
                for (std::size_t i = 0; i < v.size(); ++i) detail::gen_number(v[i], at(p, i), s.grid);
                break;
        }
    }
    if (name == "order" && c.contains("relation")) {
        const std::string r = c["relation"].get<std::string>();
        if (r != "nonneg" && r != "positive") fail(at(ptr, "relation"), "expected \"nonneg\" or \"positive\"");
    }
    for (const auto& r : required_fields().at(name))
        if (!c.contains(r)) fail(at(ptr, r), "missing (required by " + name + ")");
}

}  // namespace

namespace detail {

std::string pointer_at(const std::string& ptr, const std::string& key) { return at(ptr, key); }

GenNumber gen_number(const json& v, const std::string& ptr, const EpsGrid& grid) {
    if (v.is_number()) return GenNumber::constant(number(v, ptr));
    const json* text = &v;
    std::string tp = ptr;
    if (v.is_object()) {
        allowed(v, ptr, {"expr", "overrides"});
        if (!v.contains("expr")) fail(at(ptr, "expr"), "missing");
        text = &v["expr"];
        tp = at(ptr, "expr");
    }
    try {
        const Expr e = expression(*text, tp, 1);
        std::map<int, Expr> ov;
        if (v.is_object() && v.contains("overrides")) {
            const std::string op = at(ptr, "overrides");
            object(v["overrides"], op);
            for (const auto& [key, t] : v["overrides"].items()) {
                const Expr oe = expression(t, at(op, key), 1);
                for (int k : override_levels(key, grid, at(op, key))) ov[k] = oe;
            }
        }
        return GenNumber::closed(e, std::move(ov));
    } catch (const PreconditionViolated& e) {
        fail(tp, e.what());
    }
}

}  // namespace detail

Scenario parse_scenario(const json& doc, const RunOptions& opt) {
    object(doc, "");
    allowed(doc, "", {"nets", "mollifier", "grid", "compacts", "testfns", "checks"});
    Scenario s;
    s.doc = doc;
    s.grid = build_grid(doc, opt);
    s.M = build_moments(doc, opt);
    if (doc.contains("compacts")) {
        object(doc["compacts"], "/compacts");
        for (const auto& [name, v] : doc["compacts"].items()) s.compacts.emplace(name, build_compact(v, at("/compacts", name)));
    }
    if (doc.contains("testfns")) {
        object(doc["testfns"], "/testfns");
        for (const auto& [name, v] : doc["testfns"].items()) s.testfns.emplace(name, build_testfn(v, at("/testfns", name)));
    }
    if (doc.contains("nets")) {
        object(doc["nets"], "/nets");
        for (const auto& [name, v] : doc["nets"].items()) s.nets.emplace(name, build_net(v, at("/nets", name), s));
    }
    if (!doc.contains("checks")) fail("/checks", "missing");
    const json& checks = doc["checks"];
    if (!checks.is_array() || checks.empty()) fail("/checks", "expected a nonempty array");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        validate_check(checks[i], at("/checks", i), s);
        if (checks[i].contains("id") && !ids.insert(checks[i]["id"].get<std::string>()).second)
            fail(at(at("/checks", i), "id"), "duplicate id");
        s.checks.push_back(checks[i]);
    }
    return s;
}

Scenario load_scenario(const std::string& path, const RunOptions& opt) {
    std::ifstream in(path);
    if (!in) throw SchemaError("", "cannot open scenario file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(doc, opt);
}

}  // namespace epsnet::cli
