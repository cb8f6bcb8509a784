#include "epsnet/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace epsnet::cli {

namespace {

struct Flags {
    std::string expr, embed, expr2;
    int dim = 1;
    bool pierced = false;
    std::vector<std::string> overrides;
    std::vector<double> K, annulus, restrict_annulus, container;
    std::vector<std::string> phi, shift, at;
    std::optional<double> alpha, m, N, rho;
    std::vector<double> lambdas, radii;
    std::string number, relation, a, b, expect;
    std::optional<int> k, max_order, budget;
    std::vector<int> deriv;
    bool represent = false;
    std::string mode;
    std::string scenario;
};

struct Global {
    std::string out = "-";
    std::string format = "json";
    int jobs = 1;
    std::optional<int> kmin, kmax, moments;
    std::optional<std::uint64_t> seed;
    bool timing = false;
    bool ignore_expect = false;
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    while (used < s.size() && s[used] == ' ') ++used;
    if (used != s.size() || s.empty()) throw UsageError(what + ": '" + s + "' is not a number");
    return v;
}

std::vector<double> coords(const std::string& s, const std::string& what) {
    std::vector<double> v;
    for (const auto& p : split(s, ',')) v.push_back(to_double(p, what));
    return v;
}

// --phi "c1,c2;r;q"
json testfn(const std::string& s) {
    const auto parts = split(s, ';');
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("--phi expects \"c1,...,cd;r[;q]\", got '" + s + "'");
    json j = {{"center", coords(parts[0], "--phi centre")}, {"radius", to_double(parts[1], "--phi radius")}};
    if (parts.size() == 3 && !parts[2].empty()) j["q"] = parts[2];
    return j;
}

json compact(const std::vector<double>& lohi, int dim, const char* kind) {
    if (std::string(kind) == "annulus") return {{"annulus", lohi}, {"dim", dim}};
    if (dim == 1) return {{"interval", lohi}};
    return {{"cube", lohi}, {"dim", dim}};
}

json net_def(const Flags& f, const std::string& expr) {
    json n;
    if (!f.embed.empty() && &expr == &f.expr) {
        n["embed"] = f.embed;
    } else {
        n["expr"] = expr;
        n["dim"] = f.dim;
    }
    if (f.pierced) n["domain"] = "pierced";
    if (!f.overrides.empty() && &expr == &f.expr) {
        json ov = json::object();
        for (const auto& o : f.overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw UsageError("--override expects \"k=expr\", got '" + o + "'");
            ov[o.substr(0, eq)] = o.substr(eq + 1);
        }
        n["overrides"] = ov;
    }
    return n;
}

// Maps a subcommand invocation onto a one-check scenario.
json scenario_from_flags(const std::string& check, const Flags& f) {
    json doc;
    json c = {{"id", check}, {"check", check}};
    const bool needs_net = check != "order" && check != "mollifier-info";
    if (needs_net) {
        if (f.expr.empty() == f.embed.empty()) throw UsageError("exactly one of --expr, --embed is required");
        doc["nets"]["u"] = net_def(f, f.expr);
        c["net"] = "u";
    }
    if (check == "equal") {
        if (f.expr2.empty()) throw UsageError("--expr2 is required");
        doc["nets"]["v"] = net_def(f, f.expr2);
        c["net2"] = "v";
    }
    json names = json::array();
    if (!f.K.empty()) {
        doc["compacts"]["K"] = compact(f.K, f.dim, "box");
        names.push_back("K");
    }
    if (!f.annulus.empty()) {
        doc["compacts"]["annulus"] = compact(f.annulus, f.dim, "annulus");
        names.push_back("annulus");
    }
    if (!names.empty()) c["compacts"] = names;
    if (!f.phi.empty()) {
        json t = json::array();
        for (std::size_t i = 0; i < f.phi.size(); ++i) {
            const std::string name = "phi" + std::to_string(i + 1);
            doc["testfns"][name] = testfn(f.phi[i]);
            t.push_back(name);
        }
        c["testfns"] = t;
    }
    if (!f.container.empty()) {
        doc["compacts"]["container"] = compact(f.container, f.dim, "box");
        c["container"] = "container";
    }
    if (!f.restrict_annulus.empty()) {
        doc["compacts"]["restrict"] = compact(f.restrict_annulus, f.dim, "annulus");
        c["restrict"] = "restrict";
    }
    if (f.alpha) c["alpha"] = *f.alpha;
    if (f.m) c["m"] = *f.m;
    if (f.N) c["N"] = *f.N;
    if (f.rho) c["rho"] = *f.rho;
    if (f.k) c["k"] = *f.k;
    if (f.max_order) c["max_order"] = *f.max_order;
    if (f.budget) c["budget"] = *f.budget;
    if (!f.lambdas.empty()) c["lambdas"] = f.lambdas;
    if (!f.radii.empty()) c["radii"] = f.radii;
    if (!f.deriv.empty()) c["deriv"] = f.deriv;
    if (!f.shift.empty()) {
        json s = json::array();
        for (const auto& h : f.shift) s.push_back(coords(h, "--shift"));
        c["shifts"] = s;
    }
    if (!f.at.empty()) c["at"] = f.at;
    if (!f.number.empty()) c["number"] = f.number;
    if (!f.relation.empty()) c["relation"] = f.relation;
    if (!f.a.empty()) c["a"] = f.a;
    if (!f.b.empty()) c["b"] = f.b;
    if (f.represent) c["represent"] = true;
    if (!f.expect.empty()) c["expect"] = f.expect;
    doc["checks"] = json::array({c});
    return doc;
}

// Pointers of a flag-built scenario, in the words of the command line.
std::string flag_location(const std::string& ptr) {
    static const std::vector<std::pair<std::string, std::string>> names{
        {"/nets/u/overrides", "--override"}, {"/nets/u/expr", "--expr"}, {"/nets/u/embed", "--embed"},
        {"/nets/v/expr", "--expr2"},         {"/compacts/K", "--K"},     {"/compacts/annulus", "--annulus"},
        {"/compacts/container", "--container"}, {"/compacts/restrict", "--restrict-annulus"}, {"/testfns", "--phi"},
        {"/grid", "--grid-kmin/--grid-kmax"}, {"/mollifier", "--moments"}};
    for (const auto& [p, flag] : names)
        if (ptr.rfind(p, 0) == 0) return flag;
    if (ptr.rfind("/checks/0/", 0) == 0) return "--" + ptr.substr(10);
    return ptr;
}

enum Opt : unsigned {
    NET = 1u << 0,
    EXPR2 = 1u << 1,
    KSET = 1u << 2,
    ANNULUS = 1u << 3,
    PHI = 1u << 4,
    ALPHA = 1u << 5,
    LAMBDAS = 1u << 6,
    M = 1u << 7,
    SHIFT = 1u << 8,
    AT = 1u << 9,
    NUMBER = 1u << 10,
    AB = 1u << 11,
    KDEG = 1u << 12,
    TEMPERED = 1u << 13,
    ZERODIV = 1u << 14,
    DERIV = 1u << 15,
    RESTRICT = 1u << 16,
    MAXORDER = 1u << 17,
};

void add_options(CLI::App* s, Flags& f, unsigned which) {
    if (which & NET) {
        s->add_option("--expr", f.expr, "net expression in x (d=1) or x1..xd and eps");
        s->add_option("--embed", f.embed, "embedded distribution, e.g. delta, heaviside, xplus(2)");
        s->add_option("--dim", f.dim, "spatial dimension")->check(CLI::Range(1, 9));
        s->add_flag("--pierced", f.pierced, "net lives on the pierced space");
        s->add_option("--override", f.overrides, "per-level override \"k=expr\" (k a level, even or odd)");
    }
    if (which & EXPR2) s->add_option("--expr2", f.expr2, "second net");
    if (which & KSET) s->add_option("--K", f.K, "compact set: interval or cube [lo, hi]")->expected(2);
    if (which & ANNULUS) s->add_option("--annulus", f.annulus, "annulus r_in r_out")->expected(2);
    if (which & PHI) s->add_option("--phi", f.phi, "test function \"c1,...,cd;r[;q]\"");
    if (which & ALPHA) s->add_option("--alpha", f.alpha, "degree");
    if (which & LAMBDAS) s->add_option("--lambdas", f.lambdas, "scaling factors");
    if (which & M) s->add_option("--m", f.m, "negligibility order");
    if (which & SHIFT) s->add_option("--shift", f.shift, "translation \"h1,...,hd\"");
    if (which & AT) {
        s->add_option("--at", f.at, "point coordinates (generalized numbers in eps)")->required();
        s->add_option("--container", f.container, "box [lo, hi] containing the point")->expected(2);
    }
    if (which & NUMBER) {
        s->add_option("--number", f.number, "generalized number in eps")->required();
        s->add_option("--relation", f.relation, "nonneg or positive")->check(CLI::IsMember({"nonneg", "positive"}));
    }
    if (which & AB) {
        s->add_option("--a", f.a, "lower bound (generalized number)")->required();
        s->add_option("--b", f.b, "upper bound (generalized number)")->required();
    }
    if (which & KDEG) s->add_option("--k", f.k, "polynomial degree")->required();
    if (which & TEMPERED) {
        s->add_option("--N", f.N, "growth order")->required();
        s->add_option("--radii", f.radii, "box half-widths");
        s->add_flag("--represent", f.represent, "check the tempered representative instead of the net");
    }
    if (which & MAXORDER) s->add_option("--max-order", f.max_order, "highest derivative order");
    if (which & ZERODIV) {
        s->add_option("--rho", f.rho, "window exponent; omitted: ladder 0.5, 1, 2, 4");
        s->add_option("--budget", f.budget, "order budget");
    }
    if (which & DERIV) s->add_option("--deriv", f.deriv, "derivative multi-index");
    if (which & RESTRICT) s->add_option("--restrict-annulus", f.restrict_annulus, "compare with the input here")->expected(2);
    s->add_option("--expect", f.expect, "pass or fail")->check(CLI::IsMember({"pass", "fail"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks on nets of smooth functions", "epsnet"};
    app.fallthrough();
    app.require_subcommand(1);
    Global g;
    Flags f;
    app.add_option("--out", g.out, "report path (default stdout)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--grid-kmin", g.kmin, "first grid level");
    app.add_option("--grid-kmax", g.kmax, "last grid level");
    app.add_option("--moments", g.moments, "mollifier moment order M");
    app.add_option("--seed", g.seed, "seed echoed into the report");
    app.add_flag("--timing", g.timing, "record wall times (reports stop being byte-reproducible)");
    app.add_flag("--ignore-expect", g.ignore_expect, "ignore expect fields when setting ok");

    const unsigned BOTH_SETS = KSET | ANNULUS;
    const std::vector<std::tuple<std::string, std::string, unsigned>> simple{
        {"classify", "moderateness of a net on compact sets", NET | BOTH_SETS | DERIV},
        {"equal", "equality of two nets in the quotient", NET | EXPR2 | BOTH_SETS | M | MAXORDER},
        {"eval-point", "value at a generalized point", NET | AT},
        {"order", "nonnegativity or strict positivity of a generalized number", NUMBER | M},
        {"embed", "embed a distribution by mollification", NET | BOTH_SETS},
        {"integrate", "integral of |f| between generalized bounds", NET | AB | M},
        {"pair", "pairings with test functions", NET | PHI},
        {"associate", "association via pairings", NET | PHI},
        {"radial", "radial factorization on annuli", NET | ALPHA | ANNULUS | M},
        {"extend", "homogeneous extension through the origin", NET | ALPHA | RESTRICT | M},
        {"tempered", "tempered growth check", NET | ALPHA | TEMPERED | MAXORDER},
        {"coeffs", "coefficients of a homogeneous polynomial", NET | KDEG | BOTH_SETS | M},
        {"zerodiv", "zero-divisor search", NET | KSET | ZERODIV},
        {"mollifier-info", "mollifier coefficients and moments", 0u},
    };
    std::map<CLI::App*, std::string> check_of;
    for (const auto& [name, help, which] : simple) {
        auto* s = app.add_subcommand(name, help);
        add_options(s, f, which);
        check_of[s] = name;
    }
    struct Moded {
        std::string name, help;
        std::vector<std::string> modes;
        unsigned which;
    };
    const std::vector<Moded> moded{
        {"homog", "strong, weak or associative homogeneity", {"strong", "weak", "assoc"}, NET | ALPHA | LAMBDAS | M | BOTH_SETS | PHI},
        {"euler", "Euler equation, strong or associated", {"strong", "assoc"}, NET | ALPHA | M | BOTH_SETS | PHI},
        {"invariance", "scaling or translation invariance", {"scale", "translate"}, NET | LAMBDAS | SHIFT | M | BOTH_SETS},
    };
    std::map<CLI::App*, const Moded*> moded_of;
    for (const auto& md : moded) {
        auto* s = app.add_subcommand(md.name, md.help);
        s->add_option("mode", f.mode, "mode")->required()->check(CLI::IsMember(md.modes));
        add_options(s, f, md.which);
        moded_of[s] = &md;
    }
    auto* run_cmd = app.add_subcommand("run", "run a scenario file");
    run_cmd->add_option("scenario", f.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "epsnet: " << e.what() << "\n";
        return 2;
    }

    RunOptions opt;
    opt.grid_kmin = g.kmin;
    opt.grid_kmax = g.kmax;
    opt.moments = g.moments;
    opt.seed = g.seed;
    opt.jobs = g.jobs;
    opt.timing = g.timing;
    opt.ignore_expect = g.ignore_expect;

    CLI::App* sub = app.get_subcommands().front();
    const bool from_flags = sub != run_cmd;
    try {
        Scenario s;
        if (!from_flags) {
            opt.source = f.scenario;
            s = load_scenario(f.scenario, opt);
        } else {
            std::string check = check_of.count(sub) ? check_of[sub] : moded_of[sub]->name + "-" + f.mode;
            s = parse_scenario(scenario_from_flags(check, f), opt);
        }
        const Report r = run_scenario(s, opt);
        if (g.out == "-")
            out << render(r, g.format) << std::flush;
        else
            emit_report(r, g.out, g.format);
        for (const auto& rec : r.doc["records"]) {
            const bool passed = rec["passed"].get<bool>(), expected_fail = rec["expect"] == "fail";
            if (!passed)
                err << "epsnet: " << rec["id"].get<std::string>() << ": " << rec["verdict"]["text"].get<std::string>()
                    << (expected_fail ? " (expected)" : "") << "\n";
            else if (!rec["ok"].get<bool>())
                err << "epsnet: " << rec["id"].get<std::string>() << ": passed but expected to fail\n";
        }
        return r.exit_code;
    } catch (const UsageError& e) {
        err << "epsnet: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        if (from_flags) {
            const std::string msg = e.what();
            const auto colon = msg.find(": ");
            err << "epsnet: " << flag_location(e.pointer()) << ": " << (colon == std::string::npos ? msg : msg.substr(colon + 2)) << "\n";
        } else {
            err << "epsnet: schema error at " << e.what() << "\n";
        }
        return 2;
    } catch (const std::exception& e) {
        err << "epsnet: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace epsnet::cli
