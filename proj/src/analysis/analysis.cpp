#include "epsnet/analysis.hpp"

#include "epsnet/algebra.hpp"
#include "epsnet/error.hpp"
#include "epsnet/parallel.hpp"
#include "epsnet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epsnet {

TestFunction TestFunction::make(std::vector<double> center, double radius, Expr q) {
    if (center.empty() || center.size() > 9) throw PreconditionViolated("test function dimension must lie in 1..9");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw PreconditionViolated("test function radius must be positive");
    if (q.depends_on_eps() || q.uses_kernel()) throw PreconditionViolated("test function modulation must be a function of x");
    if (q.variable_extent() > static_cast<int>(center.size()))
        throw PreconditionViolated("modulation uses more variables than the test function dimension");
    TestFunction t;
    t.center = std::move(center);
    t.radius = radius;
    t.modulation = std::move(q);
    t.norm = std::pow(1.0 / (radius * bump_mass()), static_cast<double>(t.center.size()));
    t.away = std::any_of(t.center.begin(), t.center.end(), [&](double c) { return std::abs(c) > radius; });
    return t;
}

TestFunction TestFunction::make(std::vector<double> center, double radius, std::string_view q) {
    const int d = static_cast<int>(center.size());
    return make(std::move(center), radius, parse(q, d));
}

bool TestFunction::modulated() const { return !(modulation.is_constant(0.0) || modulation.is_constant(1.0)); }

double TestFunction::operator()(std::span<const double> x) const {
    double v = norm;
    for (int i = 0; i < dim(); ++i) {
        v *= bump_derivative(0, (x[i] - center[i]) / radius);
        if (v == 0.0) return 0.0;
    }
    if (modulated()) v *= evaluate(modulation, Binding{x, 1.0});
    return v;
}

CompactSet TestFunction::support() const {
    CompactSet K;
    K.dim = dim();
    for (double c : center) K.box.push_back({c - radius, c + radius});
    return K;
}

Expr TestFunction::expr() const {
    Expr e = Expr::constant(norm);
    for (int i = 0; i < dim(); ++i) {
        const Expr t = fold::div(fold::sub(Expr::variable(i), Expr::constant(center[i])), Expr::constant(radius));
        e = fold::mul(e, Expr::unary(Op::Bump, t, 0));
    }
    if (modulated()) e = fold::mul(e, modulation);
    return e;
}

std::string TestFunction::str() const {
    std::ostringstream os;
    os << "phi(c=";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << center[i];
    os << ", r=" << radius;
    if (modulated()) os << ", q=" << print(modulation, dim());
    os << ")";
    return os.str();
}

bool PairingSequence::any_flagged() const { return std::any_of(flagged.begin(), flagged.end(), [](bool b) { return b; }); }

EpsGrid pairing_grid(const Net& u, const EpsGrid& grid) { return u.uses_kernel() ? grid.capped(14) : grid; }

namespace {

// Breakpoints resolving eps-scale structure near the origin.
std::vector<double> eps_breaks(double eps, double a, double b) {
    std::vector<double> br;
    for (int j = -32; j <= 32; ++j) {
        const double t = j * eps / 4;
        if (t > a && t < b) br.push_back(t);
    }
    return br;
}

bool resolve_eps(const Net& u) { return u.uses_kernel() || !u.overrides().empty() || (u.dim() == 1 && u.depends_on_eps()); }

}  // namespace

PairingSequence pair(const Net& u, const TestFunction& phi, const EpsGrid& grid_in) {
    if (u.dim() != phi.dim()) throw PreconditionViolated("test function dimension differs from the net");
    const EpsGrid grid = pairing_grid(u, grid_in);
    grid.validate();
    const CompactSet supp = phi.support();
    if (u.domain().is_pierced() && !phi.away)
        throw PiercedViolation("pairing a pierced net needs a test function supported away from 0: " + phi.str());
    u.domain().check(supp, grid);

    PairingSequence s;
    s.grid = grid;
    s.where = phi.str();
    const std::size_t n = grid.size();
    s.values.assign(n, 0.0);
    s.errors.assign(n, 0.0);
    s.flagged.assign(n, false);
    s.evaluations.assign(n, 0);
    const int d = u.dim();
    const bool fine = resolve_eps(u);

    parallel_for(n, [&](std::size_t i) {
        const double eps = grid.eps(i);
        const int k = grid.level(i);
        std::vector<double> x(d);
        bool converged = true;
        std::size_t evals = 0;
        double err_sum = 0.0;
        // integrate over axis `a` with x[0..a) fixed
        std::function<double(int)> level = [&](int a) -> double {
            const double lo = phi.center[a] - phi.radius, hi = phi.center[a] + phi.radius;
            const std::vector<double> br = fine ? eps_breaks(eps, lo, hi) : std::vector<double>{};
            auto f = [&](double t) {
                x[a] = t;
                if (a + 1 < d) return level(a + 1);
                const double w = phi(x);
                if (w == 0.0) return 0.0;
                return u.eval(k, eps, x) * w;
            };
            const QuadResult q = integrate(f, lo, hi, br);
            converged = converged && q.converged;
            evals += q.evaluations;
            if (a == 0) err_sum += q.error;
            return q.value;
        };
        const double v = level(0);
        s.values[i] = v;
        s.errors[i] = err_sum;
        s.evaluations[i] = evals;
        s.flagged[i] = !converged || err_sum > 1e-10 * (1.0 + std::abs(v));
    });
    return s;
}

GenNumber integrate_abs(const Net& f, const GenNumber& a, const GenNumber& b, const EpsGrid& grid_in) {
    if (f.dim() != 1) throw PreconditionViolated("integrate_abs needs a one-dimensional net");
    const EpsGrid& grid = a.is_tabulated() ? a.grid() : (b.is_tabulated() ? b.grid() : grid_in);
    grid.validate();
    const std::vector<double> av = a.on(grid), bv = b.on(grid);
    const PositivityVerdict pos = strictly_positive(b - a, 12, grid);
    if (!pos.passed) {
        // diagnostic: the raw integrals, and whether f is visibly nonzero in between
        double raw = 0.0, seen = 0.0, at = 0.0;
        const double lo = *std::min_element(av.begin(), av.end());
        const double hi = *std::max_element(bv.begin(), bv.end());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (bv[i] > av[i]) {
                raw = std::max(raw, integrate([&](double t) { return std::abs(f.eval(grid.level(i), grid.eps(i), std::span(&t, 1))); },
                                              av[i], bv[i])
                                        .value);
            }
            if (hi > lo) {
                for (int j = 1; j < 16; ++j) {
                    double t = lo + (hi - lo) * j / 16;
                    const double v = std::abs(f.eval(grid.level(i), grid.eps(i), std::span(&t, 1)));
                    if (v > seen) {
                        seen = v;
                        at = t;
                    }
                }
            }
        }
        std::ostringstream os;
        os << "a << b fails (" << pos.note << "); raw integral max " << raw;
        if (seen > 0.0) os << " while |f| reaches " << seen << " at x=" << at << " inside the interval hull";
        throw PreconditionViolated(os.str());
    }
    std::vector<double> vals(grid.size());
    const bool fine = resolve_eps(f);
    parallel_for(grid.size(), [&](std::size_t i) {
        const double eps = grid.eps(i);
        const int k = grid.level(i);
        auto g = [&](double t) { return std::abs(f.eval(k, eps, std::span(&t, 1))); };
        const std::vector<double> br = fine ? eps_breaks(eps, av[i], bv[i]) : std::vector<double>{};
        vals[i] = integrate(g, av[i], bv[i], br).value;
    });
    return GenNumber::tabulated(grid, std::move(vals));
}

std::size_t tail_quarter_begin(std::size_t n) { return n - (n + 3) / 4; }

std::string PhiAssociation::str() const {
    std::ostringstream os;
    os.precision(10);
    os << (label.empty() ? phi.str() : label) << ": ";
    if (converges)
        os << "Converges(" << limit << ")";
    else
        os << "NotConvergent";
    os.precision(3);
    os << " osc=" << oscillation;
    return os.str();
}

bool AssociationVerdict::any_flagged() const {
    return std::any_of(per_phi.begin(), per_phi.end(), [](const PhiAssociation& p) { return p.sequence.any_flagged(); });
}

bool AssociationVerdict::converges_to_zero(double tol) const {
    if (!converges) return false;
    return std::all_of(per_phi.begin(), per_phi.end(), [&](const PhiAssociation& p) { return std::abs(p.limit) < tol; });
}

std::string AssociationVerdict::str() const {
    std::string s = converges ? "Converges" : "NotConvergent";
    for (const auto& p : per_phi) s += "; " + p.str();
    return s;
}

PhiAssociation assess(const TestFunction& phi, PairingSequence seq, double assoc_tol) {
    PhiAssociation p;
    p.phi = phi;
    p.sequence = std::move(seq);
    const auto& v = p.sequence.values;
    if (v.empty()) throw PreconditionViolated("empty pairing sequence");
    const std::size_t b = tail_quarter_begin(v.size());
    const auto [mn, mx] = std::minmax_element(v.begin() + b, v.end());
    p.oscillation = *mx - *mn;
    p.limit = v.back();
    p.converges = p.oscillation < assoc_tol;
    // rate of the successive differences
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double dlt = std::abs(v[i + 1] - v[i]);
        if (dlt > 0.0) {
            xs.push_back(std::log(p.sequence.grid.eps(i)));
            ys.push_back(std::log(dlt));
        }
    }
    p.rate = std::nan("");
    if (xs.size() >= 3) {
        double mx_ = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx_ += xs[i], my += ys[i];
        mx_ /= xs.size();
        my /= xs.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) sxx += (xs[i] - mx_) * (xs[i] - mx_), sxy += (xs[i] - mx_) * (ys[i] - my);
        p.rate = sxy / sxx;
    }
    return p;
}

AssociationVerdict associate(const Net& u, const std::vector<TestFunction>& phis, const EpsGrid& grid, double assoc_tol) {
    if (phis.empty()) throw PreconditionViolated("association needs at least one test function");
    AssociationVerdict r;
    r.converges = true;
    for (const auto& phi : phis) {
        PhiAssociation p = assess(phi, pair(u, phi, grid), assoc_tol);
        r.converges = r.converges && p.converges;
        r.per_phi.push_back(std::move(p));
    }
    return r;
}

}  // namespace epsnet
