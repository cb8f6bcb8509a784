#include "epsnet/quadrature.hpp"

#include "epsnet/error.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <vector>

namespace epsnet {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

struct Panel {
    double value;
    std::size_t evals;
};

Panel panel(const std::function<double(double)>& f, double a, double b) {
    std::size_t n = 0;
    auto counted = [&](double x) {
        ++n;
        return f(x);
    };
    const double v = Rule::integrate(counted, a, b);
    return {v, n};
}

void refine(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth,
            const QuadOptions& opt, QuadResult& out) {
    const double m = 0.5 * (a + b);
    const Panel l = panel(f, a, m);
    const Panel r = panel(f, m, b);
    out.evaluations += l.evals + r.evals;
    const double both = l.value + r.value;
    if (!std::isfinite(both)) throw DomainError("integrand is not finite", "quadrature");
    const double err = std::abs(both - whole);
    if (err <= std::max(tol, opt.rel_tol * std::abs(both)) || !(m > a && m < b)) {
        out.value += both;
        out.error += err;
        return;
    }
    if (depth >= opt.max_depth || out.evaluations > opt.max_evaluations) {
        out.value += both;
        out.error += err;
        out.converged = false;
        return;
    }
    refine(f, a, m, l.value, 0.5 * tol, depth + 1, opt, out);
    refine(f, m, b, r.value, 0.5 * tol, depth + 1, opt, out);
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b) { return Rule::integrate(f, a, b); }

QuadResult integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breaks,
                     const QuadOptions& opt) {
    QuadResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double length = b - a;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        const Panel p = panel(f, lo, hi);
        out.evaluations += p.evals;
        if (!std::isfinite(p.value)) throw DomainError("integrand is not finite", "quadrature");
        refine(f, lo, hi, p.value, opt.abs_tol * (hi - lo) / length, 0, opt, out);
    }
    if (!std::isfinite(out.value)) throw DomainError("integral is not finite", "quadrature");
    out.value *= sign;
    return out;
}

}  // namespace epsnet
