#include "epsnet/algebra.hpp"

#include "epsnet/error.hpp"
#include "epsnet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace epsnet {

namespace {

Domain intersect(const Domain& a, const Domain& b) {
    if (a.is_pierced() && b.is_pierced() && a.centre(9) != b.centre(9))
        throw PreconditionViolated("cannot combine nets pierced at different points");
    if (a.is_pierced()) {
        Domain d = a;
        if (b.is_pierced()) d.delta = std::max(a.delta, b.delta);
        return d;
    }
    if (b.is_pierced()) return b;
    if (a.kind == Domain::Kind::Local) return a;
    return b;
}

std::shared_ptr<const Kernel> pick_kernel(const std::shared_ptr<const Kernel>& a, const std::shared_ptr<const Kernel>& b) {
    if (a && b && a != b) throw PreconditionViolated("nets bound to different mollifiers");
    return a ? a : b;
}

Expr apply(CombineOp op, const Expr& a, const Expr& b) {
    switch (op) {
        case CombineOp::Add: return fold::add(a, b);
        case CombineOp::Sub: return fold::sub(a, b);
        case CombineOp::Mul: return fold::mul(a, b);
    }
    return {};
}

std::set<int> levels(const Net& a) {
    std::set<int> s;
    for (const auto& [k, e] : a.overrides()) s.insert(k);
    return s;
}

}  // namespace

Net combine(const Net& a, const Net& b, CombineOp op) {
    if (a.dim() != b.dim()) throw PreconditionViolated("nets of different dimension");
    Net r(apply(op, a.base(), b.base()), a.dim(), intersect(a.domain(), b.domain()), pick_kernel(a.kernel(), b.kernel()));
    std::set<int> ks = levels(a);
    ks.merge(levels(b));
    for (int k : ks) r.set_override(k, apply(op, a.at_level(k), b.at_level(k)));
    r.set_guarded(a.guarded() || b.guarded());
    return r;
}

Net operator+(const Net& a, const Net& b) { return combine(a, b, CombineOp::Add); }
Net operator-(const Net& a, const Net& b) { return combine(a, b, CombineOp::Sub); }
Net operator*(const Net& a, const Net& b) { return combine(a, b, CombineOp::Mul); }

Net scale(const Net& a, const GenNumber& c) {
    if (c.is_tabulated()) throw GridMismatch("scaling needs a closed-form generalized number");
    Net r(fold::mul(c.expr(), a.base()), a.dim(), a.domain(), a.kernel());
    std::set<int> ks = levels(a);
    for (const auto& [k, e] : c.overrides()) ks.insert(k);
    for (int k : ks) r.set_override(k, fold::mul(c.expr_at(k), a.at_level(k)));
    r.set_guarded(a.guarded());
    return r;
}

Net derive(const Net& a, int axis) {
    if (axis < 0 || axis >= a.dim()) throw PreconditionViolated("derivative axis out of range");
    const bool sing = a.singular_ok();
    Net r(differentiate(a.base(), axis, sing), a.dim(), a.domain(), a.kernel());
    for (const auto& [k, e] : a.overrides()) r.set_override(k, differentiate(e, axis, sing));
    r.set_guarded(a.guarded());
    return r;
}

Net derive(const Net& a, const std::vector<int>& multi_index) {
    if (static_cast<int>(multi_index.size()) != a.dim()) throw PreconditionViolated("multi-index length differs from the dimension");
    Net r = a;
    for (int i = 0; i < a.dim(); ++i) {
        if (multi_index[i] < 0) throw PreconditionViolated("negative derivative order");
        for (int j = 0; j < multi_index[i]; ++j) r = derive(r, i);
    }
    return r;
}

std::vector<std::vector<int>> multi_indices(int dim, int max_order) {
    std::vector<std::vector<int>> out;
    for (int order = 0; order <= max_order; ++order) {
        std::vector<int> a(dim, 0);
        // compositions of `order` into dim parts, lexicographically descending
        auto rec = [&](auto&& self, int i, int left) -> void {
            if (i == dim - 1) {
                a[i] = left;
                out.push_back(a);
                return;
            }
            for (int v = left; v >= 0; --v) {
                a[i] = v;
                self(self, i + 1, left - v);
            }
        };
        rec(rec, 0, order);
    }
    return out;
}

bool structurally_zero(const Net& n) {
    if (!simplify_zero(n.base())) return false;
    for (const auto& [k, e] : n.overrides())
        if (!simplify_zero(e)) return false;
    return true;
}

DecayVerdict equals(const Net& u, const Net& v, const std::vector<CompactSet>& Ks, double m, const EpsGrid& grid,
                    const Tolerances& tol, int max_order) {
    const Net diff = u - v;
    if (structurally_zero(diff)) return exact_zero("u - v");
    if (Ks.empty()) throw PreconditionViolated("equality needs at least one compact set");
    std::vector<DecayVerdict> all;
    for (const auto& K : Ks)
        for (const auto& mi : multi_indices(u.dim(), max_order)) {
            DecayVerdict vd = verdict_negligible(sample_sup(diff, K, mi, grid), m, tol);
            std::ostringstream os;
            os << K.str() << " d^(";
            for (std::size_t i = 0; i < mi.size(); ++i) os << (i ? "," : "") << mi[i];
            os << ")";
            vd.where = os.str();
            all.push_back(std::move(vd));
        }
    return worst(all);
}

GenNumber eval_point(const Net& u, const GenPoint& p, const EpsGrid& grid) {
    grid.validate();
    if (static_cast<int>(p.coords.size()) != u.dim()) throw PreconditionViolated("point dimension differs from the net");
    u.domain().check(p.container, grid);
    const auto pts = p.on(grid);
    std::vector<double> vals(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { vals[i] = u.eval(grid.level(i), grid.eps(i), pts[i]); });
    return GenNumber::tabulated(grid, std::move(vals));
}

DecayVerdict nonneg_consistent(const GenNumber& a, double m, const EpsGrid& grid, const Tolerances& tol) {
    const EpsGrid& g = a.is_tabulated() ? a.grid() : grid;
    DecaySamples s;
    s.grid = g;
    s.where = "negative part";
    for (double v : a.on(g)) {
        if (std::isnan(v)) throw DomainError("generalized number is not a number", a.str());
        s.values.push_back(std::max(0.0, -v));
    }
    return verdict_negligible(s, m, tol);
}

PositivityVerdict strictly_positive(const GenNumber& a, int m_budget, const EpsGrid& grid) {
    if (m_budget < 0 || m_budget > 12) throw PreconditionViolated("positivity budget outside 0..12");
    const EpsGrid& g = a.is_tabulated() ? a.grid() : grid;
    const std::vector<double> v = a.on(g);
    PositivityVerdict r;
    for (int m0 = 0; m0 <= m_budget; ++m0) {
        bool ok = true;
        for (std::size_t i = g.tail_begin(); i < v.size() && ok; ++i) ok = v[i] > std::pow(g.eps(i), m0);
        if (ok) {
            r.passed = true;
            r.m0 = m0;
            r.note = "a > eps^" + std::to_string(m0) + " on the tail";
            return r;
        }
    }
    r.note = "no m0 <= " + std::to_string(m_budget) + " bounds the tail from below";
    return r;
}

Map Map::translate(std::vector<double> h) {
    Map m;
    m.kind = Kind::Translate;
    m.shift = std::move(h);
    return m;
}

Map Map::scale(double lambda) {
    if (!(lambda != 0.0) || !std::isfinite(lambda)) throw PreconditionViolated("scale factor must be finite and nonzero");
    Map m;
    m.kind = Kind::Scale;
    m.lambda = lambda;
    return m;
}

Map Map::gen_scale(GenNumber b) {
    Map m;
    m.kind = Kind::GenScale;
    m.factor = std::move(b);
    return m;
}

Map Map::radial() {
    Map m;
    m.kind = Kind::Radial;
    return m;
}

Map Map::general(std::vector<Net> components) {
    if (components.empty()) throw PreconditionViolated("a general map needs components");
    for (const auto& c : components)
        if (c.dim() != components.front().dim()) throw PreconditionViolated("map components of different dimension");
    Map m;
    m.kind = Kind::General;
    m.components = std::move(components);
    return m;
}

std::string Map::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Translate:
            os << "x + (";
            for (std::size_t i = 0; i < shift.size(); ++i) os << (i ? "," : "") << shift[i];
            os << ")";
            break;
        case Kind::Scale: os << lambda << " x"; break;
        case Kind::GenScale: os << "(" << factor.str() << ") x"; break;
        case Kind::Radial: os << "x/|x|"; break;
        case Kind::General:
            os << "(";
            for (std::size_t i = 0; i < components.size(); ++i) os << (i ? ", " : "") << components[i].str();
            os << ")";
            break;
    }
    return os.str();
}

Expr norm_expr(int dim) {
    if (dim == 1) return Expr::unary(Op::Abs, Expr::variable(0));
    Expr s;
    for (int i = 0; i < dim; ++i) s = fold::add(s, fold::pow(Expr::variable(i), Rational(2)));
    return Expr::unary(Op::Sqrt, s);
}

namespace {

// The map as one net per output coordinate, over the input dimension.
std::vector<Net> components_of(const Map& g, int dim) {
    std::vector<Net> out;
    switch (g.kind) {
        case Map::Kind::Translate:
            if (static_cast<int>(g.shift.size()) != dim) throw PreconditionViolated("shift length differs from the dimension");
            for (int i = 0; i < dim; ++i) out.emplace_back(fold::add(Expr::variable(i), Expr::constant(g.shift[i])), dim);
            break;
        case Map::Kind::Scale:
            for (int i = 0; i < dim; ++i) out.emplace_back(fold::mul(Expr::constant(g.lambda), Expr::variable(i)), dim);
            break;
        case Map::Kind::GenScale: {
            if (g.factor.is_tabulated()) {
                const EpsGrid& gr = g.factor.grid();
                for (int i = 0; i < dim; ++i) {
                    Net n(fold::mul(Expr::constant(g.factor.values().back()), Expr::variable(i)), dim);
                    for (std::size_t j = 0; j < gr.size(); ++j)
                        n.set_override(gr.level(j), fold::mul(Expr::constant(g.factor.values()[j]), Expr::variable(i)));
                    out.push_back(std::move(n));
                }
                break;
            }
            for (int i = 0; i < dim; ++i) {
                Net n(fold::mul(g.factor.expr(), Expr::variable(i)), dim);
                for (const auto& [k, e] : g.factor.overrides()) n.set_override(k, fold::mul(e, Expr::variable(i)));
                out.push_back(std::move(n));
            }
            break;
        }
        case Map::Kind::Radial: {
            const Expr r = norm_expr(dim);
            for (int i = 0; i < dim; ++i) out.emplace_back(fold::div(Expr::variable(i), r), dim, Domain::pierced());
            break;
        }
        case Map::Kind::General:
            if (static_cast<int>(g.components.size()) != dim) throw PreconditionViolated("map has the wrong number of components");
            out = g.components;
            break;
    }
    return out;
}

Net substitute_net(const Net& u, const std::vector<Net>& comps, Domain domain) {
    const int in_dim = comps.front().dim();
    std::set<int> ks = levels(u);
    std::shared_ptr<const Kernel> kernel = u.kernel();
    for (const auto& c : comps) {
        ks.merge(levels(c));
        kernel = pick_kernel(kernel, c.kernel());
    }
    auto at = [&](int k) {
        std::vector<Expr> vars;
        for (const auto& c : comps) vars.push_back(k < 0 ? c.base() : c.at_level(k));
        return substitute(k < 0 ? u.base() : u.at_level(k), vars);
    };
    Net r(at(-1), in_dim, std::move(domain), kernel);
    for (int k : ks) r.set_override(k, at(k));
    bool guarded = u.guarded();
    for (const auto& c : comps) guarded = guarded || c.guarded();
    r.set_guarded(guarded);
    return r;
}

// Domain of u o g when it can be written down without a compact set.
std::optional<Domain> transported(const Net& u, const Map& g) {
    const Domain& d = u.domain();
    if (g.kind == Map::Kind::Radial) {
        if (d.kind == Domain::Kind::Local) return std::nullopt;
        if (d.is_pierced()) {
            // x/|x| stays on the unit sphere; only a centre on it is reachable
            double r = 0.0;
            for (double c : d.centre(u.dim())) r += c * c;
            if (std::abs(std::sqrt(r) - 1.0) < 1e-12) return std::nullopt;
        }
        return Domain::pierced();
    }
    if (d.is_whole()) {
        if (g.kind == Map::Kind::General)
            for (const auto& c : g.components)
                if (!c.domain().is_whole()) return std::nullopt;
        return Domain::whole();
    }
    if (!d.is_pierced()) return std::nullopt;
    std::vector<double> c = d.centre(u.dim());
    const bool at_origin = std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
    switch (g.kind) {
        case Map::Kind::Translate:
            for (std::size_t i = 0; i < c.size(); ++i) c[i] -= g.shift[i];
            return Domain::pierced(c, d.delta);
        case Map::Kind::Scale:
            for (double& v : c) v /= g.lambda;
            return Domain::pierced(c, d.delta);
        case Map::Kind::GenScale:
            if (at_origin) return d;
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

}  // namespace

Net compose_unchecked(const Net& u, const Map& g) {
    auto dom = transported(u, g);
    if (!dom)
        throw PreconditionViolated("the domain of u o g is not known without a compact set; use the checked composition");
    Net r = substitute_net(u, components_of(g, u.dim()), *dom);
    r.note("composed with " + g.str());
    return r;
}

Net compose(const Net& u, const Map& g, const CompactSet& K, const EpsGrid& grid, const Tolerances& tol) {
    grid.validate();
    K.validate();
    const std::vector<Net> comps = components_of(g, u.dim());
    const int in_dim = comps.front().dim();
    if (K.dim != in_dim) throw PreconditionViolated("compact set dimension differs from the map's input");
    for (const auto& c : comps) c.domain().check(K, grid);

    const Domain& ud = u.domain();
    const std::vector<double> centre = ud.is_pierced() ? ud.centre(u.dim()) : std::vector<double>{};
    DecaySamples sup;
    sup.grid = grid;
    sup.where = "image of " + K.str();
    sup.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double eps = grid.eps(i);
        const int k = grid.level(i);
        const std::vector<double> pts = K.lattice(eps);
        for (std::size_t p = 0; p < pts.size(); p += in_dim) {
            const std::span<const double> x(pts.data() + p, in_dim);
            std::vector<double> y(comps.size());
            for (std::size_t a = 0; a < comps.size(); ++a) y[a] = comps[a].eval(k, eps, x);
            std::vector<double> xs(x.begin(), x.end());
            double n = 0.0;
            for (double v : y) {
                if (!std::isfinite(v)) throw CBoundednessViolation("map is not finite on " + K.str(), eps, xs);
                n = std::max(n, std::abs(v));
            }
            sup.values[i] = std::max(sup.values[i], n);
            if (ud.is_pierced()) {
                double dist = 0.0;
                for (std::size_t a = 0; a < y.size(); ++a) dist += (y[a] - centre[a]) * (y[a] - centre[a]);
                dist = std::sqrt(dist);
                if (dist < ud.exclusion(grid.eps(0))) {
                    std::ostringstream os;
                    os << "image of " << K.str() << " under " << g.str() << " meets the excluded ball of " << ud.str();
                    throw CBoundednessViolation(os.str(), eps, xs);
                }
            } else if (ud.kind == Domain::Kind::Local && !ud.region->contains(y, 1e-12)) {
                throw CBoundednessViolation("image of " + K.str() + " leaves " + ud.region->str(), eps, xs);
            }
        }
    }
    bool all_zero = std::all_of(sup.values.begin() + grid.tail_begin(), sup.values.end(), [](double v) { return v == 0.0; });
    if (!all_zero) {
        const Fit f = fit_order(sup);
        if (f.slope < -tol.slope_tol) {
            std::ostringstream os;
            os << "image of " << K.str() << " under " << g.str() << " is unbounded as eps -> 0 (slope " << f.slope << ")";
            throw CBoundednessViolation(os.str(), grid.eps(grid.size() - 1), {});
        }
    }

    // a general map is only known to be c-bounded on K
    auto dom = g.kind == Map::Kind::General ? std::nullopt : transported(u, g);
    Net r = substitute_net(u, comps, dom ? *dom : Domain::local(K));
    r.note("composed with " + g.str() + " (image checked on " + K.str() + ")");
    return r;
}

}  // namespace epsnet
