#include "epsnet/homogeneity.hpp"

#include "epsnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epsnet {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string vec(const std::vector<double>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s + ")";
}

std::string index_str(const std::vector<int>& b) {
    std::string s = "(";
    for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
    return s + ")";
}

void validate(const HomogeneityQuery& q) {
    if (!std::isfinite(q.alpha)) throw PreconditionViolated("degree must be finite");
    if (q.lambdas.empty()) throw PreconditionViolated("empty scale set");
    for (double l : q.lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw PreconditionViolated("scales must be positive and finite");
        if (l == 1.0) throw PreconditionViolated("the scale 1 is trivial and not allowed");
    }
    if (!(q.m > 0.0) || !std::isfinite(q.m)) throw PreconditionViolated("negligibility order must be positive");
    if (!(q.assoc_tol > 0.0)) throw PreconditionViolated("association tolerance must be positive");
    q.grid.validate();
}

std::vector<CompactSet> compacts(const Net& u, const HomogeneityQuery& q) {
    return q.Ks.empty() ? default_compacts(u) : q.Ks;
}

std::vector<TestFunction> testfns(const Net& u, const HomogeneityQuery& q, HomogeneityMode mode) {
    std::vector<TestFunction> phis = q.phis.empty() ? default_testfns(u, mode) : q.phis;
    for (const auto& phi : phis)
        if (phi.dim() != u.dim()) throw PreconditionViolated("test function dimension differs from the net");
    return phis;
}

Expr rational_pow(const Expr& base, double alpha) { return fold::pow(base, Rational::approximate(alpha)); }

// Apply f to the base and every override of u.
template <class F>
Net map_exprs(const Net& u, F f) {
    Net r(f(u.base()), u.dim(), u.domain(), u.kernel());
    for (const auto& [k, e] : u.overrides()) r.set_override(k, f(e));
    r.set_guarded(u.guarded());
    return r;
}

// sum_i x_i^2, smooth through the origin.
Expr square_norm(int dim) {
    Expr s;
    for (int i = 0; i < dim; ++i) s = fold::add(s, fold::pow(Expr::variable(i), Rational(2)));
    return s;
}

// 1 - sigma(|x|/s) = bstep((2|x|^2/s^2 - 5)/3)
Expr outer_step(int dim, const Expr& s) {
    const Expr y2 = fold::div(square_norm(dim), fold::pow(s, Rational(2)));
    const Expr a = fold::div(fold::sub(fold::mul(Expr::constant(2.0), y2), Expr::constant(5.0)), Expr::constant(3.0));
    return Expr::unary(Op::Step, a);
}

Net constant_at_zero(const Net& u) {
    std::vector<Net> zero;
    for (int i = 0; i < u.dim(); ++i) zero.emplace_back(Expr::constant(0.0), u.dim());
    return compose_unchecked(u, Map::general(std::move(zero)));
}

DecayVerdict constancy(const Net& u, const std::vector<CompactSet>& Ks, double m, const EpsGrid& grid, const Tolerances& tol) {
    return equals(u, constant_at_zero(u), Ks, m, grid, tol);
}

// One (map, K) cell: u o g against c u, checked composition.
HomogeneityCell map_cell(const Net& u, const Map& g, double c, const CompactSet& K, double m, const EpsGrid& grid,
                         const Tolerances& tol, std::string label) {
    const Net lhs = compose(u, g, K, grid, tol);
    const Net rhs = c == 1.0 ? u : scale(u, GenNumber::constant(c));
    HomogeneityCell cell{std::move(label), equals(lhs, rhs, {K}, m, grid, tol), {}};
    cell.verdict.where = cell.label;
    return cell;
}

HomogeneityVerdict conclude(std::vector<HomogeneityCell> cells) {
    HomogeneityVerdict r;
    std::vector<DecayVerdict> vs;
    for (const auto& c : cells) vs.push_back(c.verdict);
    r.overall = worst(vs);
    r.cells = std::move(cells);
    return r;
}

// r_k = <u(lambda x), phi> - lambda^alpha <u, phi>
PairingSequence residual_sequence(const Net& u, double lambda, double alpha, const TestFunction& phi, const EpsGrid& grid) {
    const Net scaled = compose(u, Map::scale(lambda), phi.support(), grid);
    const PairingSequence a = pair(scaled, phi, grid), b = pair(u, phi, grid);
    PairingSequence r = a;
    const double c = std::pow(lambda, alpha);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        r.values[i] = a.values[i] - c * b.values[i];
        r.errors[i] = a.errors[i] + c * b.errors[i];
        r.flagged[i] = a.flagged[i] || b.flagged[i];
        r.evaluations[i] = a.evaluations[i] + b.evaluations[i];
    }
    r.where = "lambda=" + num(lambda) + " " + phi.str();
    return r;
}

}  // namespace

std::vector<CompactSet> default_compacts(const Net& u) {
    const int d = u.dim();
    switch (u.domain().kind) {
        case Domain::Kind::Whole: return {CompactSet::cube(d, -1.0, 1.0)};
        case Domain::Kind::Pierced: {
            const auto c = u.domain().centre(d);
            if (std::any_of(c.begin(), c.end(), [](double v) { return v != 0.0; }))
                throw PreconditionViolated("no default compact set for a net pierced away from the origin");
            return {CompactSet::annulus(d, 0.5, 2.0)};
        }
        case Domain::Kind::Local: return {*u.domain().region};
    }
    return {};
}

std::vector<TestFunction> default_testfns(const Net& u, HomogeneityMode mode) {
    const int d = u.dim();
    std::vector<double> c1(d, 0.0), c2(d, 0.0);
    c1[0] = 1.5;
    c2[0] = -1.25;
    std::vector<TestFunction> phis{TestFunction::make(c1, 0.5), TestFunction::make(c2, 0.75, d == 1 ? "1 + x" : "1 + x1")};
    if (mode == HomogeneityMode::Assoc && !u.domain().is_pierced()) phis.push_back(TestFunction::make(std::vector<double>(d, 0.0), 1.0));
    return phis;
}

bool degree_gate(double alpha, double tol) {
    if (!std::isfinite(alpha)) return false;
    const double r = std::round(alpha);
    return std::abs(alpha - r) <= tol && r >= 0.0;
}

std::string HomogeneityVerdict::str() const {
    std::string s = overall.str();
    if (constancy) s += "; constancy " + constancy->str();
    if (!note.empty()) s += "; " + note;
    return s;
}

HomogeneityVerdict scaling_invariance(const Net& u, const HomogeneityQuery& q) {
    validate(q);
    const auto Ks = compacts(u, q);
    std::vector<HomogeneityCell> cells;
    for (double l : q.lambdas)
        for (const auto& K : Ks)
            cells.push_back(map_cell(u, Map::scale(l), 1.0, K, q.m, q.grid, q.tol, "lambda=" + num(l) + " K=" + K.str()));
    HomogeneityVerdict r = conclude(std::move(cells));
    if (r.overall.passed() && u.domain().is_whole()) r.constancy = constancy(u, Ks, q.m, q.grid, q.tol);
    return r;
}

HomogeneityVerdict translation_invariance(const Net& u, const std::vector<std::vector<double>>& shifts,
                                          const std::vector<CompactSet>& Ks_in, double m, const EpsGrid& grid,
                                          const Tolerances& tol) {
    if (shifts.empty()) throw PreconditionViolated("no shifts given");
    const auto Ks = Ks_in.empty() ? default_compacts(u) : Ks_in;
    std::vector<HomogeneityCell> cells;
    for (const auto& h : shifts)
        for (const auto& K : Ks)
            cells.push_back(map_cell(u, Map::translate(h), 1.0, K, m, grid, tol, "h=" + vec(h) + " K=" + K.str()));
    HomogeneityVerdict r = conclude(std::move(cells));
    if (r.overall.passed() && u.domain().is_whole()) r.constancy = constancy(u, Ks, m, grid, tol);
    return r;
}

HomogeneityVerdict strong_homogeneity(const Net& u, const HomogeneityQuery& q) {
    validate(q);
    const auto Ks = compacts(u, q);
    if (u.domain().is_whole() && !degree_gate(q.alpha)) {
        // only the zero net is homogeneous of such a degree on the whole space
        HomogeneityVerdict r;
        r.overall = equals(u, Net::zero(u.dim()), Ks, q.m, q.grid, q.tol);
        if (r.overall.passed()) {
            r.note = "degree " + num(q.alpha) + " is not in N0; u = 0, homogeneous of every degree";
        } else {
            r.overall.outcome = Outcome::Fails;
            r.note = "degree gate: a nonzero whole-space net cannot be homogeneous of degree " + num(q.alpha);
            r.overall.note = r.note;
        }
        return r;
    }
    std::vector<HomogeneityCell> cells;
    for (double l : q.lambdas)
        for (const auto& K : Ks)
            cells.push_back(
                map_cell(u, Map::scale(l), std::pow(l, q.alpha), K, q.m, q.grid, q.tol, "lambda=" + num(l) + " K=" + K.str()));
    return conclude(std::move(cells));
}

HomogeneityVerdict weak_homogeneity(const Net& u, const HomogeneityQuery& q) {
    validate(q);
    const auto phis = testfns(u, q, HomogeneityMode::Weak);
    for (const auto& phi : phis)
        if (!phi.away) throw PreconditionViolated("weak homogeneity needs test functions supported away from 0: " + phi.str());
    std::vector<HomogeneityCell> cells;
    bool flagged = false;
    for (double l : q.lambdas)
        for (const auto& phi : phis) {
            const PairingSequence r = residual_sequence(u, l, q.alpha, phi, q.grid);
            flagged = flagged || r.any_flagged();
            DecaySamples s;
            s.grid = r.grid;
            s.where = r.where;
            for (double v : r.values) s.values.push_back(std::abs(v));
            HomogeneityCell cell{r.where, verdict_negligible(s, q.m, q.tol), r.values};
            cell.verdict.where = r.where;
            cells.push_back(std::move(cell));
        }
    HomogeneityVerdict v = conclude(std::move(cells));
    if (flagged) v.note = "some pairings did not reach the quadrature tolerance";
    return v;
}

AssociationVerdict associative_homogeneity(const Net& u, const HomogeneityQuery& q) {
    validate(q);
    const auto phis = testfns(u, q, HomogeneityMode::Assoc);
    AssociationVerdict v;
    v.converges = true;
    for (double l : q.lambdas)
        for (const auto& phi : phis) {
            PairingSequence r = residual_sequence(u, l, q.alpha, phi, q.grid);
            std::string label = r.where;
            PhiAssociation p = assess(phi, std::move(r), q.assoc_tol);
            p.label = std::move(label);
            v.converges = v.converges && p.converges;
            v.per_phi.push_back(std::move(p));
        }
    return v;
}

Net euler_residual(const Net& u, double alpha) {
    if (!std::isfinite(alpha)) throw PreconditionViolated("degree must be finite");
    const int d = u.dim();
    const bool singular = u.singular_ok();
    Net r = map_exprs(u, [&](const Expr& e) {
        Expr s;
        for (int i = 0; i < d; ++i) s = fold::add(s, fold::mul(Expr::variable(i), differentiate(e, i, singular)));
        return fold::sub(s, fold::mul(Expr::constant(alpha), e));
    });
    r.note("Euler residual of degree " + num(alpha));
    return r;
}

DecayVerdict euler_strong(const Net& u, double alpha, const std::vector<CompactSet>& Ks, double m, const EpsGrid& grid,
                          const Tolerances& tol) {
    return equals(euler_residual(u, alpha), Net::zero(u.dim()), Ks.empty() ? default_compacts(u) : Ks, m, grid, tol);
}

AssociationVerdict euler_associated(const Net& u, double alpha, const std::vector<TestFunction>& phis, const EpsGrid& grid,
                                    double assoc_tol) {
    if (phis.empty()) throw PreconditionViolated("euler_associated needs test functions");
    return associate(euler_residual(u, alpha), phis, grid, assoc_tol);
}

Net radial_core(const Net& u, double alpha) {
    if (!std::isfinite(alpha)) throw PreconditionViolated("degree must be finite");
    const Net dir = compose_unchecked(u, Map::radial());
    const Net r = dir * Net(rational_pow(norm_expr(u.dim()), alpha), u.dim(), Domain::pierced());
    return r;
}

DecayVerdict radial_factorization_check(const Net& u, double alpha, const std::vector<CompactSet>& annuli, double m,
                                        const EpsGrid& grid, const Tolerances& tol) {
    if (!u.domain().is_pierced()) throw PreconditionViolated("radial factorization needs a pierced net");
    const auto c = u.domain().centre(u.dim());
    if (std::any_of(c.begin(), c.end(), [](double v) { return v != 0.0; }))
        throw PreconditionViolated("radial factorization needs a net pierced at the origin");
    return equals(u, radial_core(u, alpha), annuli.empty() ? default_compacts(u) : annuli, m, grid, tol);
}

double cutoff_sigma(double y) { return 1.0 - step_value((2.0 * y * y - 5.0) / 3.0); }

Expr sigma_expr(int dim, const Expr& s) { return fold::sub(Expr::constant(1.0), outer_step(dim, s)); }

std::string ExtensionResult::str() const {
    std::ostringstream os;
    os << "extension " << moderate.str() << " on B(0,1); input order " << input_order << ", bound " << bound
       << (within_bound ? " (within)" : " (exceeded)");
    return os.str();
}

ExtensionResult homogeneous_extension(const Net& u, double alpha, const EpsGrid& grid, const Tolerances& tol) {
    if (!std::isfinite(alpha)) throw PreconditionViolated("degree must be finite");
    if (!u.domain().is_pierced()) throw PreconditionViolated("homogeneous extension needs a pierced net");
    const int d = u.dim();
    ExtensionResult r;
    r.core = radial_core(u, alpha);
    const CompactSet A = CompactSet::annulus(d, 0.5, 2.0);
    r.radial = equals(u, r.core, {A}, 8.0, grid, tol);

    const Expr rho = outer_step(d, Expr::eps());
    r.extension = map_exprs(r.core, [&](const Expr& e) { return fold::mul(rho, e); });
    r.extension.set_domain(Domain::whole()).set_guarded(true);
    r.extension.note("homogeneous extension of degree " + num(alpha) + " through the origin");
    r.extension.note("radial precondition on " + A.str() + ": " + r.radial.str());
    if (!degree_gate(alpha)) r.extension.note("degree " + num(alpha) + " is not in N0: the extension is not homogeneous");

    const std::vector<int> zero(d, 0);
    r.input_order = verdict_moderate(sample_sup(u, A, zero, grid), tol.n_max, tol).order;
    r.samples = sample_sup(r.extension, CompactSet::cube(d, -1.0, 1.0), zero, grid);
    r.moderate = verdict_moderate(r.samples, tol.n_max, tol);
    r.bound = r.input_order + std::abs(alpha) + 0.5;
    r.within_bound = r.moderate.passed() && r.moderate.order <= r.bound;
    return r;
}

RestrictionResult extension_restriction(const ExtensionResult& ext, const Net& u, const CompactSet& annulus, double m,
                                        const EpsGrid& grid, const Tolerances& tol) {
    RestrictionResult r;
    r.floor = tol.abs_floor;
    // r >= 2 eps everywhere on the set puts it on the plateau of the cutoff
    const double r_in = annulus.distance_from(std::vector<double>(u.dim(), 0.0));
    r.structural = r_in >= 2.0 * grid.eps(0);
    r.verdict = r.structural ? equals(ext.core, u, {annulus}, m, grid, tol) : equals(ext.extension, u, {annulus}, m, grid, tol);
    const auto s = sample_sup(ext.extension - u, annulus, std::vector<int>(u.dim(), 0), grid);
    r.numeric_sup = *std::max_element(s.values.begin(), s.values.end());
    return r;
}

Net tempered_representative(const Net& u, double alpha) {
    const int d = u.dim();
    const Net inner = u.domain().is_pierced() ? homogeneous_extension(u, alpha).extension : u;
    if (!inner.domain().is_whole()) throw PreconditionViolated("tempered representative needs a whole-space or pierced net");
    const Net core = radial_core(u, alpha);
    const Expr s = outer_step(d, Expr::constant(1.0));  // 1 - sigma(x)
    const Expr keep = fold::sub(Expr::constant(1.0), s);
    Net a = map_exprs(inner, [&](const Expr& e) { return fold::mul(e, keep); });
    Net b = map_exprs(core, [&](const Expr& e) { return fold::mul(e, s); });
    a.set_domain(Domain::whole());
    b.set_domain(Domain::whole()).set_guarded(true);
    Net r = a + b;
    r.set_guarded(true);
    r.note("tempered representative of degree " + num(alpha));
    return r;
}

std::string TemperedVerdict::str() const {
    std::ostringstream os;
    os << (passed ? "tempered" : "not tempered");
    for (const auto& c : cells)
        if (!c.verdict.passed()) os << "; " << c.label << " " << c.verdict.str();
    if (!note.empty()) os << "; " << note;
    return os.str();
}

TemperedVerdict tempered_check(const Net& v, double N, const std::vector<double>& radii, int max_order, const EpsGrid& grid,
                               const Tolerances& tol) {
    if (!(N >= 0.0) || !std::isfinite(N)) throw PreconditionViolated("tempered order must be nonnegative");
    if (radii.empty()) throw PreconditionViolated("no radii given");
    if (max_order < 0 || max_order > 4) throw PreconditionViolated("derivative order must lie in 0..4");
    const int d = v.dim();
    const Net weight(rational_pow(fold::add(Expr::constant(1.0), norm_expr(d)), -N), d);
    const std::vector<int> zero(d, 0);

    TemperedVerdict r;
    r.passed = true;
    for (double R : radii) {
        if (!(R > 0.0)) throw PreconditionViolated("radii must be positive");
        const CompactSet box = CompactSet::cube(d, -R, R);
        for (const auto& beta : multi_indices(d, max_order)) {
            int order = 0;
            for (int b : beta) order += b;
            const DecaySamples s = sample_sup(derive(v, beta) * weight, box, zero, grid);
            HomogeneityCell cell{"R=" + num(R) + " beta=" + index_str(beta), verdict_moderate(s, tol.n_max, tol), {}};
            cell.verdict.where = cell.label;
            if (cell.verdict.passed() && cell.verdict.order > N + order) {
                cell.verdict.outcome = Outcome::Fails;
                cell.verdict.note = "moderate order above N + |beta|";
            }
            r.passed = r.passed && cell.verdict.passed();
            if (order == 0) {
                double c = 0.0;
                for (std::size_t i = 0; i < s.values.size(); ++i) c = std::max(c, s.values[i] * std::pow(grid.eps(i), N));
                r.growth.push_back(c);
            }
            r.cells.push_back(std::move(cell));
        }
    }
    if (r.growth.size() >= 2) {
        const double a = r.growth[r.growth.size() - 2], b = r.growth.back();
        if (!(b <= 2.0 * a)) {
            r.passed = false;
            r.note = "weighted sup grows from " + num(a) + " at R=" + num(radii[radii.size() - 2]) + " to " + num(b) + " at R=" +
                     num(radii.back()) + ": faster than (1+|x|)^" + num(N);
        }
    }
    return r;
}

}  // namespace epsnet
