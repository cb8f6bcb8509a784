#include "epsnet/error.hpp"
#include "epsnet/homogeneity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace epsnet {

namespace {

constexpr double kConditionLimit = 1e8;

// Exponent vectors of total degree k, lexicographically descending.
std::vector<std::vector<int>> monomials_of_degree(int dim, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> b(dim, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == dim - 1) {
            b[i] = left;
            out.push_back(b);
            return;
        }
        for (int e = left; e >= 0; --e) {
            b[i] = e;
            rec(i + 1, left - e);
        }
    };
    rec(0, k);
    return out;
}

Expr monomial(const std::vector<int>& b) {
    Expr e = Expr::constant(1.0);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i]) e = fold::mul(e, fold::pow(Expr::variable(static_cast<int>(i)), Rational(b[i])));
    return e;
}

// u at a fixed point, as a closed number when possible.
GenNumber value_at(const Net& u, const std::vector<double>& p, const EpsGrid& grid) {
    if (u.uses_kernel()) return eval_point(u, GenPoint::standard(p), grid);
    std::vector<Expr> vars;
    for (double v : p) vars.push_back(Expr::constant(v));
    std::map<int, Expr> ov;
    for (const auto& [k, e] : u.overrides()) ov[k] = substitute(e, vars);
    return GenNumber::closed(substitute(u.base(), vars), std::move(ov));
}

// sum_j w_j c_j
GenNumber combination(const std::vector<double>& w, const std::vector<GenNumber>& c) {
    GenNumber s = GenNumber::constant(0.0);
    bool first = true;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] == 0.0) continue;
        const GenNumber t = GenNumber::constant(w[j]) * c[j];
        s = first ? t : s + t;
        first = false;
    }
    return s;
}

// sum_beta c_beta x^beta as a net; tabulated coefficients become per-level overrides.
Net polynomial_net(const std::vector<GenNumber>& c, const std::vector<std::vector<int>>& mons, int dim, const EpsGrid& grid) {
    const bool tab = std::any_of(c.begin(), c.end(), [](const GenNumber& g) { return g.is_tabulated(); });
    if (!tab) {
        Net r = Net::zero(dim);
        for (std::size_t j = 0; j < c.size(); ++j) r = r + scale(Net(monomial(mons[j]), dim), c[j]);
        return r;
    }
    auto at = [&](std::size_t i) {
        Expr e;
        for (std::size_t j = 0; j < c.size(); ++j)
            e = fold::add(e, fold::mul(Expr::constant(c[j].on(grid)[i]), monomial(mons[j])));
        return e;
    };
    Net r(at(grid.size() - 1), dim);
    for (std::size_t i = 0; i < grid.size(); ++i) r.set_override(grid.level(i), at(i));
    return r;
}

}  // namespace

std::vector<std::vector<double>> coefficient_lattice(int dim, int k) {
    if (dim < 1 || k < 0) throw PreconditionViolated("bad lattice request");
    if (std::pow(k + 1.0, dim) > 2e5) throw PreconditionViolated("coefficient lattice too large for this dimension and degree");
    std::vector<std::vector<double>> out;
    std::vector<int> p(dim, 0);
    for (;;) {
        const bool has_one = std::any_of(p.begin(), p.end(), [](int v) { return v == 1; });
        const bool no_zero = std::none_of(p.begin(), p.end(), [](int v) { return v == 0; });
        if (has_one || no_zero) out.emplace_back(p.begin(), p.end());
        int i = dim - 1;
        while (i >= 0 && p[i] == k) p[i--] = 0;
        if (i < 0) break;
        ++p[i];
    }
    return out;
}

std::string CoefficientResult::str() const {
    std::ostringstream os;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
        os << (j ? ", " : "") << "x^(";
        for (std::size_t i = 0; i < monomials[j].size(); ++i) os << (i ? "," : "") << monomials[j][i];
        os << "): " << coefficients[j].str();
    }
    os << "; residual " << residual.str();
    if (!lattice.empty()) os << "; condition " << condition;
    return os.str();
}

CoefficientResult polynomial_coefficients(const Net& u, int k, double m, const std::vector<CompactSet>& Ks, const EpsGrid& grid,
                                          const Tolerances& tol) {
    if (k < 0 || k > 6) throw PreconditionViolated("polynomial degree must lie in 0..6");
    const int d = u.dim();
    CoefficientResult r;
    r.monomials = monomials_of_degree(d, k);
    if (d == 1) {
        r.coefficients.push_back(value_at(u, {1.0}, grid));
    } else {
        r.lattice = coefficient_lattice(d, k);
        const auto n = static_cast<Eigen::Index>(r.lattice.size());
        const auto q = static_cast<Eigen::Index>(r.monomials.size());
        Eigen::MatrixXd V(n, q);
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index j = 0; j < q; ++j) {
                double v = 1.0;
                for (int i = 0; i < d; ++i) v *= std::pow(r.lattice[p][i], r.monomials[j][i]);
                V(p, j) = v;
            }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        r.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
        if (!(r.condition <= kConditionLimit))
            throw PreconditionViolated("coefficient lattice system is ill-conditioned (condition " + std::to_string(r.condition) + ")");
        const Eigen::MatrixXd W = svd.solve(Eigen::MatrixXd::Identity(n, n));  // pseudo-inverse, q x n
        std::vector<GenNumber> values;
        for (const auto& p : r.lattice) values.push_back(value_at(u, p, grid));
        for (Eigen::Index j = 0; j < q; ++j) {
            std::vector<double> w(n);
            for (Eigen::Index p = 0; p < n; ++p) w[p] = W(j, p);
            r.coefficients.push_back(combination(w, values));
        }
    }
    const Net P = polynomial_net(r.coefficients, r.monomials, d, grid);
    r.residual = equals(u, P, Ks.empty() ? default_compacts(u) : Ks, m, grid, tol);
    return r;
}

}  // namespace epsnet
