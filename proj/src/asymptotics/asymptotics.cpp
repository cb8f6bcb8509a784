#include "epsnet/asymptotics.hpp"

#include "epsnet/algebra.hpp"
#include "epsnet/error.hpp"
#include "epsnet/net.hpp"
#include "epsnet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace epsnet {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::ExactZero: return "ExactZero";
        case Outcome::Negligible: return "NegligibleTo";
        case Outcome::Moderate: return "Moderate";
        case Outcome::Fails: return "Fails";
    }
    return "?";
}

std::string DecayVerdict::str() const {
    std::ostringstream os;
    os.precision(4);
    switch (outcome) {
        case Outcome::ExactZero: os << "ExactZero"; break;
        case Outcome::Negligible: os << "NegligibleTo(" << order << ")"; break;
        case Outcome::Moderate: os << "Moderate(" << order << ")"; break;
        case Outcome::Fails: os << "Fails"; break;
    }
    if (!std::isnan(slope)) os << " slope=" << slope;
    if (!where.empty()) os << " on " << where;
    return os.str();
}

namespace {

void check_values(const DecaySamples& s) {
    if (s.values.size() != s.grid.size()) throw GridMismatch("one sample per grid point expected");
    for (double v : s.values) {
        if (std::isnan(v)) throw DomainError("sample is not a number", s.where);
        if (v < 0.0) throw Error("sup-norm samples must be nonnegative");
    }
}

bool any_infinite(const DecaySamples& s) {
    return std::any_of(s.values.begin(), s.values.end(), [](double v) { return std::isinf(v); });
}

double tail_max(const DecaySamples& s) {
    double m = 0.0;
    for (std::size_t i = s.grid.tail_begin(); i < s.values.size(); ++i) m = std::max(m, s.values[i]);
    return m;
}

DecayVerdict skeleton(const DecaySamples& s) {
    DecayVerdict v;
    v.tail_begin = s.grid.level(s.grid.tail_begin());
    v.tail_end = s.grid.k_max;
    v.tail_max = tail_max(s);
    v.where = s.where;
    return v;
}

void attach(DecayVerdict& v, const Fit& f) {
    v.slope = f.slope;
    v.intercept = f.intercept;
    v.residual = f.residual;
}

}  // namespace

Fit fit_order(const DecaySamples& s) {
    s.grid.validate();
    check_values(s);
    std::vector<double> xs, ys;
    bool all_zero = true;
    for (std::size_t i = s.grid.tail_begin(); i < s.values.size(); ++i) {
        const double v = s.values[i];
        if (std::isinf(v)) throw DomainError("sample is infinite", s.where);
        if (v == 0.0) continue;
        all_zero = false;
        xs.push_back(std::log(s.grid.eps(i)));
        ys.push_back(std::log(v));
    }
    Fit f;
    if (all_zero) {
        f.all_zero = true;
        f.slope = std::numeric_limits<double>::infinity();
        return f;
    }
    if (xs.size() < 4) throw InsufficientData("fewer than 4 nonzero tail samples");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        rss += r * r;
    }
    f.residual = std::sqrt(rss / n);
    f.used = static_cast<int>(xs.size());
    return f;
}

DecayVerdict exact_zero(std::string where) {
    DecayVerdict v;
    v.outcome = Outcome::ExactZero;
    v.slope = std::numeric_limits<double>::infinity();
    v.where = std::move(where);
    v.note = "structural zero";
    return v;
}

DecayVerdict verdict_negligible(const DecaySamples& s, double m, const Tolerances& tol) {
    if (!(m >= 0.0) || m > tol.m_max) throw PreconditionViolated("negligibility order outside [0, m_max]");
    check_values(s);
    DecayVerdict v = skeleton(s);
    v.order = m;
    if (v.tail_max <= tol.abs_floor) {
        v.outcome = Outcome::Negligible;
        v.note = "tail below absolute floor";
        bool zero = true;
        for (std::size_t i = s.grid.tail_begin(); i < s.values.size(); ++i) zero = zero && s.values[i] == 0.0;
        if (zero) {
            v.slope = std::numeric_limits<double>::infinity();
        } else {
            try {
                attach(v, fit_order(s));
            } catch (const InsufficientData&) {
            }
        }
        return v;
    }
    if (any_infinite(s)) {
        v.outcome = Outcome::Fails;
        v.slope = -std::numeric_limits<double>::infinity();
        v.note = "infinite sample";
        return v;
    }
    attach(v, fit_order(s));
    v.outcome = v.slope >= m - tol.slope_tol ? Outcome::Negligible : Outcome::Fails;
    return v;
}

DecayVerdict verdict_moderate(const DecaySamples& s, double n_max, const Tolerances& tol) {
    if (!(n_max >= 0.0) || n_max > tol.n_max) throw PreconditionViolated("moderateness budget outside [0, N_max]");
    check_values(s);
    DecayVerdict v = skeleton(s);
    if (any_infinite(s)) {
        v.outcome = Outcome::Fails;
        v.slope = -std::numeric_limits<double>::infinity();
        v.note = "infinite sample";
        return v;
    }
    const Fit f = fit_order(s);
    attach(v, f);
    if (f.slope >= -n_max) {
        v.outcome = Outcome::Moderate;
        v.order = f.all_zero ? 0.0 : std::max(0.0, std::ceil(-f.slope - tol.slope_tol));
    } else {
        v.outcome = Outcome::Fails;
        v.note = "growth beyond the moderateness budget";
    }
    return v;
}

DecayVerdict worst(const std::vector<DecayVerdict>& verdicts) {
    if (verdicts.empty()) return exact_zero();
    auto rank = [](const DecayVerdict& v) { return static_cast<int>(v.outcome); };
    std::size_t best = 0;
    for (std::size_t i = 1; i < verdicts.size(); ++i) {
        const auto& a = verdicts[i];
        const auto& b = verdicts[best];
        if (rank(a) > rank(b) || (a.outcome == Outcome::Moderate && b.outcome == Outcome::Moderate && a.order > b.order))
            best = i;
    }
    return verdicts[best];
}

DecaySamples sample_sup(const Net& u, const CompactSet& K, const std::vector<int>& deriv, const EpsGrid& grid) {
    grid.validate();
    K.validate();
    if (K.dim != u.dim()) throw PreconditionViolated("compact set dimension differs from the net");
    if (!deriv.empty() && static_cast<int>(deriv.size()) != u.dim())
        throw PreconditionViolated("derivative multi-index length differs from the dimension");
    if (std::accumulate(deriv.begin(), deriv.end(), 0) > 8) throw PreconditionViolated("derivative order above 8");
    u.domain().check(K, grid);
    const Net du = deriv.empty() ? u : derive(u, deriv);

    DecaySamples s;
    s.grid = grid;
    s.deriv = deriv.empty() ? std::vector<int>(u.dim(), 0) : deriv;
    s.where = K.str();
    s.values.assign(grid.size(), 0.0);
    const int d = u.dim();
    parallel_for(grid.size(), [&](std::size_t i) {
        const double eps = grid.eps(i);
        const int k = grid.level(i);
        const std::vector<double> pts = K.lattice(eps);
        double m = 0.0;
        for (std::size_t p = 0; p < pts.size(); p += d) {
            const std::span<const double> x(pts.data() + p, d);
            double v = 0.0;
            try {
                v = std::abs(du.eval(k, eps, x));
            } catch (const DomainError& e) {
                std::ostringstream os;
                os.precision(17);
                os << e.what() << " at x=(";
                for (int a = 0; a < d; ++a) os << (a ? "," : "") << x[a];
                os << "), eps=" << eps;
                throw DomainError(os.str(), e.subexpression());
            }
            if (std::isnan(v)) throw DomainError("sample is not a number", K.str());
            m = std::max(m, v);
        }
        s.values[i] = m;
    });
    return s;
}

}  // namespace epsnet
