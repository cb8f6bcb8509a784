// bump(t) = exp(-1/(1-t^2)) on |t| < 1 and its derivatives, plus the smooth
// step bstep = normalized primitive of bump.

#include "epsnet/error.hpp"
#include "epsnet/expr.hpp"
#include "epsnet/hermite_table.hpp"
#include "epsnet/quadrature.hpp"

#include <cmath>
#include <vector>

namespace epsnet {

namespace {

constexpr int kMaxBumpOrder = 24;

// d^k/dt^k bump = bump * p_k(t) / (1-t^2)^(2k), with
// p_{k+1} = -2t p_k + (1-t^2)^2 p_k' + 4kt(1-t^2) p_k.
std::vector<std::vector<double>> build_bump_polys() {
    std::vector<std::vector<double>> p(kMaxBumpOrder + 1);
    p[0] = {1.0};
    auto mul = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> c(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
        return c;
    };
    auto add = [](std::vector<double> a, const std::vector<double>& b) {
        if (b.size() > a.size()) a.resize(b.size(), 0.0);
        for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
        return a;
    };
    const std::vector<double> one_minus_t2_sq = {1.0, 0.0, -2.0, 0.0, 1.0};
    for (int k = 0; k < kMaxBumpOrder; ++k) {
        const auto& pk = p[k];
        std::vector<double> dp(std::max<std::size_t>(1, pk.size() - 1), 0.0);
        for (std::size_t i = 1; i < pk.size(); ++i) dp[i - 1] = static_cast<double>(i) * pk[i];
        std::vector<double> next = mul({0.0, -2.0}, pk);
        next = add(next, mul(one_minus_t2_sq, dp));
        next = add(next, mul({0.0, 4.0 * k, 0.0, -4.0 * k}, pk));
        p[k + 1] = std::move(next);
    }
    return p;
}

const std::vector<std::vector<double>>& bump_polys() {
    static const auto polys = build_bump_polys();
    return polys;
}

double bump0(double t) {
    const double s = 1.0 - t * t;
    return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

// F(t) = int_{-1}^t bump on [-1, 0].
struct StepTable {
    HermiteTable left;
    double mass = 0.0;
};

const StepTable& step_table() {
    static const StepTable table = [] {
        constexpr int n = 2048;
        const double h = 1.0 / n;
        std::vector<double> f(n + 1), d1(n + 1), d2(n + 1);
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = -1.0 + h * i;
            if (i > 0) acc += gauss_legendre(bump0, t - h, t);
            f[i] = acc;
            d1[i] = bump0(t);
            d2[i] = bump_derivative(1, t);
        }
        StepTable s;
        s.mass = 2.0 * acc;
        s.left = HermiteTable(-1.0, h, std::move(f), std::move(d1), std::move(d2));
        return s;
    }();
    return table;
}

}  // namespace

double bump_derivative(int k, double t) {
    if (k < 0 || k > kMaxBumpOrder) throw Error("bump derivative order out of range");
    const double s = 1.0 - t * t;
    if (!(s > 0.0)) return 0.0;
    if (k == 0) return std::exp(-1.0 / s);
    const auto& p = bump_polys()[k];
    double poly = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) poly = poly * t + p[i];
    // Fold the (1-t^2)^(-2k) factor into the exponent to avoid overflow near |t| = 1.
    return poly * std::exp(-1.0 / s - 2.0 * k * std::log(s));
}

double bump_mass() { return step_table().mass; }

double step_value(double t) {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const StepTable& s = step_table();
    if (t <= 0.0) return s.left(t) / s.mass;
    return 1.0 - s.left(-t) / s.mass;
}

}  // namespace epsnet
