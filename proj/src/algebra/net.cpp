#include "epsnet/net.hpp"

#include "epsnet/error.hpp"

#include <sstream>

namespace epsnet {

Domain Domain::pierced(std::vector<double> center, double delta) {
    Domain d;
    d.kind = Kind::Pierced;
    d.center = std::move(center);
    d.delta = delta;
    return d;
}

Domain Domain::local(CompactSet region) {
    Domain d;
    d.kind = Kind::Local;
    d.region = std::move(region);
    return d;
}

std::vector<double> Domain::centre(int dim) const {
    std::vector<double> c = center;
    c.resize(dim, 0.0);
    return c;
}

void Domain::check(const CompactSet& K, const EpsGrid& grid) const {
    switch (kind) {
        case Kind::Whole:
            return;
        case Kind::Pierced: {
            const double need = exclusion(grid.eps(0));
            const double have = K.distance_from(centre(K.dim));
            if (have < need) {
                std::ostringstream os;
                os << "compact set " << K.str() << " comes within " << have << " of the excluded point (needs " << need << ")";
                throw PiercedViolation(os.str());
            }
            return;
        }
        case Kind::Local: {
            const std::vector<double> pts = K.lattice();
            for (std::size_t p = 0; p < pts.size(); p += K.dim) {
                std::vector<double> x(pts.begin() + p, pts.begin() + p + K.dim);
                if (!region->contains(x, 1e-12))
                    throw PiercedViolation("compact set " + K.str() + " leaves the region " + region->str() +
                                           " on which the net was checked");
            }
            return;
        }
    }
}

std::string Domain::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Whole: return "whole";
        case Kind::Pierced:
            os << "pierced(";
            for (std::size_t i = 0; i < center.size(); ++i) os << (i ? "," : "") << center[i];
            if (center.empty()) os << "0";
            os << "; delta=" << delta << ")";
            return os.str();
        case Kind::Local: return "local(" + region->str() + ")";
    }
    return "?";
}

Net::Net(Expr base, int dim, Domain domain, std::shared_ptr<const Kernel> kernel)
    : base_(std::move(base)), dim_(dim), domain_(std::move(domain)), kernel_(std::move(kernel)) {
    if (dim_ < 1) throw PreconditionViolated("net dimension must be positive");
    if (base_.variable_extent() > dim_) throw PreconditionViolated("expression uses more variables than the net dimension");
}

Net Net::parse(std::string_view text, int dim, Domain domain, std::shared_ptr<const Kernel> kernel) {
    return Net(epsnet::parse(text, dim), dim, std::move(domain), std::move(kernel));
}

const Expr& Net::at_level(int k) const {
    auto it = overrides_.find(k);
    return it == overrides_.end() ? base_ : it->second;
}

Net& Net::set_override(int k, Expr e) {
    if (e.variable_extent() > dim_) throw PreconditionViolated("override uses more variables than the net dimension");
    overrides_[k] = std::move(e);
    return *this;
}

Net& Net::set_domain(Domain d) {
    domain_ = std::move(d);
    return *this;
}

Net& Net::set_kernel(std::shared_ptr<const Kernel> k) {
    kernel_ = std::move(k);
    return *this;
}

Net& Net::set_guarded(bool g) {
    guarded_ = g;
    return *this;
}

Net& Net::note(std::string line) {
    provenance_.push_back(std::move(line));
    return *this;
}

bool Net::uses_kernel() const {
    if (base_.uses_kernel()) return true;
    for (const auto& [k, e] : overrides_)
        if (e.uses_kernel()) return true;
    return false;
}

bool Net::depends_on_eps() const {
    if (base_.depends_on_eps() || !overrides_.empty()) return true;
    return false;
}

bool Net::depends_on_space() const {
    if (base_.depends_on_space()) return true;
    for (const auto& [k, e] : overrides_)
        if (e.depends_on_space()) return true;
    return false;
}

double Net::eval(int k, double eps, std::span<const double> x) const {
    return evaluate(at_level(k), Binding{x, eps}, kernel_.get());
}

std::string Net::str() const {
    std::string s = print(base_, dim_);
    for (const auto& [k, e] : overrides_) s += " | k=" + std::to_string(k) + ": " + print(e, dim_);
    return s;
}

GenNumber GenNumber::constant(double c) { return closed(Expr::constant(c)); }

GenNumber GenNumber::closed(Expr e, std::map<int, Expr> overrides) {
    if (e.depends_on_space()) throw PreconditionViolated("a generalized number may depend on eps only");
    for (const auto& [k, o] : overrides)
        if (o.depends_on_space()) throw PreconditionViolated("a generalized number may depend on eps only");
    if (e.uses_kernel()) throw PreconditionViolated("a generalized number cannot reference the mollifier");
    GenNumber g;
    g.expr_ = std::move(e);
    g.overrides_ = std::move(overrides);
    return g;
}

GenNumber GenNumber::parse(std::string_view text) { return closed(epsnet::parse(text, 1)); }

GenNumber GenNumber::tabulated(EpsGrid grid, std::vector<double> values) {
    if (values.size() != grid.size()) throw GridMismatch("tabulated values do not match the grid");
    GenNumber g;
    g.tabulated_ = true;
    g.grid_ = grid;
    g.values_ = std::move(values);
    return g;
}

Expr GenNumber::expr_at(int k) const {
    if (tabulated_) throw PreconditionViolated("tabulated number has no closed form");
    auto it = overrides_.find(k);
    return it == overrides_.end() ? expr_ : it->second;
}

std::vector<double> GenNumber::on(const EpsGrid& g) const {
    if (tabulated_) {
        if (!(g == grid_)) throw GridMismatch("tabulated number lives on " + grid_.str() + ", requested " + g.str());
        return values_;
    }
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = evaluate(expr_at(g.level(i)), Binding{{}, g.eps(i)});
    return v;
}

std::string GenNumber::str() const {
    if (!tabulated_) {
        std::string s = print(expr_, 1);
        for (const auto& [k, e] : overrides_) s += " | k=" + std::to_string(k) + ": " + print(e, 1);
        return s;
    }
    std::ostringstream os;
    os.precision(6);
    os << "table on " << grid_.str() << " [";
    for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? ", " : "") << values_[i];
    os << "]";
    return os.str();
}

namespace {

GenNumber arith(const GenNumber& a, const GenNumber& b, Expr (*op)(const Expr&, const Expr&), double (*f)(double, double)) {
    if (!a.is_tabulated() && !b.is_tabulated()) {
        std::map<int, Expr> ov;
        for (const auto& [k, e] : a.overrides()) ov[k] = op(e, b.expr_at(k));
        for (const auto& [k, e] : b.overrides()) ov[k] = op(a.expr_at(k), e);
        return GenNumber::closed(op(a.expr(), b.expr()), std::move(ov));
    }
    const EpsGrid& g = a.is_tabulated() ? a.grid() : b.grid();
    const std::vector<double> x = a.on(g), y = b.on(g);
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = f(x[i], y[i]);
    return GenNumber::tabulated(g, std::move(z));
}

}  // namespace

GenNumber operator+(const GenNumber& a, const GenNumber& b) {
    return arith(a, b, fold::add, [](double x, double y) { return x + y; });
}
GenNumber operator-(const GenNumber& a, const GenNumber& b) {
    return arith(a, b, fold::sub, [](double x, double y) { return x - y; });
}
GenNumber operator*(const GenNumber& a, const GenNumber& b) {
    return arith(a, b, fold::mul, [](double x, double y) { return x * y; });
}

GenPoint GenPoint::standard(std::vector<double> x) {
    GenPoint p;
    const int d = static_cast<int>(x.size());
    p.container.dim = d;
    for (double v : x) {
        p.coords.push_back(GenNumber::constant(v));
        p.container.box.push_back({v, v});
    }
    return p;
}

std::vector<std::vector<double>> GenPoint::on(const EpsGrid& g) const {
    if (coords.empty()) throw PreconditionViolated("generalized point without coordinates");
    if (static_cast<int>(coords.size()) != container.dim) throw PreconditionViolated("point and container dimensions differ");
    std::vector<std::vector<double>> cols;
    for (const auto& c : coords) cols.push_back(c.on(g));
    std::vector<std::vector<double>> pts(g.size(), std::vector<double>(coords.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t a = 0; a < coords.size(); ++a) pts[i][a] = cols[a][i];
        if (!container.contains(pts[i], 1e-12)) {
            std::ostringstream os;
            os << "generalized point leaves its container " << container.str() << " at eps=" << g.eps(i);
            throw PreconditionViolated(os.str());
        }
    }
    return pts;
}

}  // namespace epsnet
