#include "epsnet/zerodiv.hpp"

#include "epsnet/error.hpp"
#include "epsnet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace epsnet {

namespace {

constexpr int kWindowSamples = 33;
constexpr std::size_t kMinMembers = 4;
constexpr double kProductOrder = 12.0;

struct LevelBest {
    double center = 0.0;
    int order = -1;  // -1: no window fits in K
};

// max j <= budget with s < eps^j; -1 when even j = 0 fails
int smallness_order(double s, double eps, int budget) {
    if (s == 0.0) return budget;
    int j = -1;
    for (int t = 0; t <= budget; ++t) {
        if (s < std::pow(eps, t))
            j = t;
        else
            break;
    }
    return j;
}

LevelBest scan_level(const Net& f, const std::pair<double, double>& box, int k, double eps, double h, int budget,
                     std::optional<double> keep) {
    LevelBest best;
    const int n = 257;
    const double lo = box.first + h, hi = box.second - h;
    if (lo > hi) return best;
    std::vector<double> xs;
    if (lo == hi) {
        xs.push_back(lo);
    } else {
        const double step = (box.second - box.first) / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = box.first + i * step;
            if (x >= lo && x <= hi) xs.push_back(x);
        }
        if (xs.empty()) xs.push_back(0.5 * (lo + hi));
    }
    std::vector<int> ord(xs.size());
    for (std::size_t c = 0; c < xs.size(); ++c) {
        double s = 0.0;
        for (int i = 0; i < kWindowSamples; ++i) {
            const double x = xs[c] - h + 2.0 * h * i / (kWindowSamples - 1);
            s = std::max(s, std::abs(f.eval(k, eps, std::span(&x, 1))));
        }
        ord[c] = smallness_order(s, eps, budget);
    }
    // middle of the longest run of best centers
    const int top = *std::max_element(ord.begin(), ord.end());
    best.order = top;
    if (top < 0) return best;
    std::size_t run_b = 0, run_len = 0;
    for (std::size_t i = 0; i < ord.size();) {
        if (ord[i] != top) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < ord.size() && ord[j] == top) ++j;
        if (j - i > run_len) run_b = i, run_len = j - i;
        i = j;
    }
    best.center = xs[run_b + (run_len - 1) / 2];
    if (keep)
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (xs[i] == *keep && ord[i] == top) best.center = *keep;
    return best;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

std::string WindowReport::str() const {
    std::ostringstream os;
    os << (found ? "windows" : "NotFound") << " rho=" << rho << " budget=" << budget << " levels=[";
    for (std::size_t i = 0; i < levels.size(); ++i) os << (i ? "," : "") << levels[i];
    os << "] centers=[";
    for (std::size_t i = 0; i < centers.size(); ++i) os << (i ? "," : "") << num(centers[i]);
    os << "] orders=[";
    for (std::size_t i = 0; i < orders.size(); ++i) os << (i ? "," : "") << orders[i];
    os << "]";
    return os.str();
}

WindowReport find_small_windows(const Net& f, const CompactSet& K, double rho, int budget, const EpsGrid& grid) {
    if (f.dim() != 1) throw PreconditionViolated("zero-divisor search is one-dimensional");
    if (!(rho > 0.0) || rho > 4.0) throw PreconditionViolated("window exponent rho must lie in (0, 4]");
    if (budget < 1 || budget > 12) throw PreconditionViolated("order budget must lie in 1..12");
    if (K.dim != 1 || K.kind != CompactSet::Kind::Box) throw PreconditionViolated("K must be an interval");
    K.validate();
    grid.validate();
    f.domain().check(K, grid);

    WindowReport r;
    r.rho = rho;
    r.budget = budget;
    r.grid = grid;
    r.K = K;
    std::vector<LevelBest> best(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double eps = grid.eps(i);
        best[i] = scan_level(f, K.box[0], grid.level(i), eps, std::pow(eps, rho), budget, std::nullopt);
    });
    // keep one centre across levels where possible, so the windows can be sampled with one focus
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (best[i].order >= 0 && best[i - 1].order >= 0 && best[i].center != best[i - 1].center) {
            const double eps = grid.eps(i);
            best[i] = scan_level(f, K.box[0], grid.level(i), eps, std::pow(eps, rho), budget, best[i - 1].center);
        }
    for (const auto& b : best) {
        r.level_centers.push_back(b.center);
        r.level_orders.push_back(b.order);
    }
    // greedy is optimal here: the required order only grows with the position
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const int need = std::min(static_cast<int>(r.levels.size()) + 1, budget);
        if (best[i].order >= need) {
            r.levels.push_back(grid.level(i));
            r.centers.push_back(best[i].center);
            r.half_widths.push_back(std::pow(grid.eps(i), rho));
            r.orders.push_back(best[i].order);
        }
    }
    r.found = r.levels.size() >= kMinMembers && r.orders.back() >= budget;
    return r;
}

Net build_witness(const WindowReport& w) {
    if (!w.found || w.levels.empty()) throw PreconditionViolated("no windows to build a witness from");
    Net g = Net::zero(1);
    for (std::size_t i = 0; i < w.levels.size(); ++i) {
        const Expr t = fold::div(fold::sub(Expr::variable(0), Expr::constant(w.centers[i])), Expr::constant(w.half_widths[i]));
        g.set_override(w.levels[i], fold::mul(Expr::constant(std::numbers::e), Expr::unary(Op::Bump, t, 0)));
    }
    g.note("bump witness on " + std::to_string(w.levels.size()) + " levels, rho=" + num(w.rho));
    return g;
}

std::vector<CompactSet> window_sets(const WindowReport& w) {
    std::vector<double> cs = w.centers;
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    std::vector<CompactSet> out;
    for (double c : cs) {
        CompactSet K = w.K;
        K.focus = {c};
        K.focus_rho = w.rho;
        out.push_back(std::move(K));
    }
    return out;
}

std::string ZeroDivisorVerdict::str() const {
    if (!is_zero_divisor) return "NoEvidence(budget=" + std::to_string(report.budget) + ")";
    return "IsZeroDivisor(" + report.str() + "; f*g " + product.str() + "; g " + witness_nonzero.str() + ")";
}

ZeroDivisorVerdict zero_divisor_verdict(const Net& f, const CompactSet& K, std::optional<double> rho, int budget,
                                        const EpsGrid& grid) {
    ZeroDivisorVerdict v;
    const std::vector<double> rhos = rho ? std::vector<double>{*rho} : kRhoLadder;
    for (double r : rhos) {
        v.rhos_tried.push_back(r);
        v.report = find_small_windows(f, K, r, budget, grid);
        if (!v.report.found) continue;
        const Net g = build_witness(v.report);
        const auto Ks = window_sets(v.report);
        v.product = equals(f * g, Net::zero(1), Ks, kProductOrder, grid);
        try {
            v.witness_nonzero = equals(g, Net::zero(1), Ks, kProductOrder, grid);
        } catch (const InsufficientData&) {
            // too few subsequence levels in the tail to fit; sup g = 1 there anyway
            v.witness_nonzero = DecayVerdict{};
            v.witness_nonzero.note = "unit sup on the subsequence";
        }
        if (v.product.passed() && !v.witness_nonzero.passed()) {
            v.is_zero_divisor = true;
            v.witness = g;
            return v;
        }
    }
    return v;
}

}  // namespace epsnet
