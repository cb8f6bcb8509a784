#include "epsnet/asymptotics.hpp"
#include "epsnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace epsnet {

double EpsGrid::eps(std::size_t i) const { return eps_at_level(level(i)); }

double EpsGrid::eps_at_level(int k) const {
    if (base == 2.0) return std::ldexp(1.0, -k);
    return std::pow(base, -k);
}

EpsGrid EpsGrid::capped(int k) const {
    EpsGrid g = *this;
    g.k_max = std::min(k_max, k);
    return g;
}

void EpsGrid::validate() const {
    if (!(base > 1.0)) throw PreconditionViolated("grid base must exceed 1");
    if (k_min < 0) throw PreconditionViolated("grid eps must not exceed 1");
    if (k_max - k_min + 1 < 8) throw PreconditionViolated("grid needs at least 8 points");
}

std::string EpsGrid::str() const {
    std::ostringstream os;
    os << base << "^-[" << k_min << ".." << k_max << "]";
    return os.str();
}

CompactSet CompactSet::interval(double lo, double hi, int samples) {
    CompactSet k;
    k.box = {{lo, hi}};
    k.samples = samples;
    k.validate();
    return k;
}

CompactSet CompactSet::cube(int dim, double lo, double hi, int samples) {
    CompactSet k;
    k.dim = dim;
    k.box.assign(dim, {lo, hi});
    k.samples = samples;
    k.validate();
    return k;
}

CompactSet CompactSet::annulus(int dim, double r_in, double r_out, int samples) {
    CompactSet k;
    k.kind = Kind::Annulus;
    k.dim = dim;
    k.r_in = r_in;
    k.r_out = r_out;
    k.samples = samples;
    k.validate();
    return k;
}

int CompactSet::per_axis() const {
    if (samples > 0) return samples;
    return dim == 1 ? 257 : 65;
}

void CompactSet::validate() const {
    if (dim < 1) throw PreconditionViolated("compact set dimension must be positive");
    if (samples == 1 || samples < 0) throw PreconditionViolated("a compact set needs at least 2 samples per axis");
    if (kind == Kind::Box) {
        if (static_cast<int>(box.size()) != dim) throw PreconditionViolated("box bounds do not match the dimension");
        for (auto [lo, hi] : box)
            if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw PreconditionViolated("empty or unbounded box");
    } else if (!(r_in > 0.0 && r_in < r_out && std::isfinite(r_out))) {
        throw PreconditionViolated("annulus needs 0 < r_in < r_out");
    }
    if (!focus.empty() && static_cast<int>(focus.size()) != dim) throw PreconditionViolated("focus does not match the dimension");
    if (!(focus_rho > 0.0) || focus_rho > 4.0) throw PreconditionViolated("focus exponent must lie in (0, 4]");
}

double CompactSet::distance_from(const std::vector<double>& c) const {
    if (kind == Kind::Annulus) {
        double r = 0.0;
        for (double v : c) r += v * v;
        r = std::sqrt(r);
        return std::max({0.0, r_in - r, r - r_out});
    }
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double v = i < static_cast<int>(c.size()) ? c[i] : 0.0;
        const double d = std::max({0.0, box[i].first - v, v - box[i].second});
        s += d * d;
    }
    return std::sqrt(s);
}

double CompactSet::extent() const {
    if (kind == Kind::Annulus) return r_out;
    double e = 0.0;
    for (auto [lo, hi] : box) e = std::max({e, std::abs(lo), std::abs(hi)});
    return e;
}

bool CompactSet::contains(const std::vector<double>& x, double slack) const {
    if (kind == Kind::Annulus) {
        double r = 0.0;
        for (double v : x) r += v * v;
        r = std::sqrt(r);
        return r >= r_in - slack && r <= r_out + slack;
    }
    for (int i = 0; i < dim; ++i)
        if (x[i] < box[i].first - slack || x[i] > box[i].second + slack) return false;
    return true;
}

std::string CompactSet::str() const {
    std::ostringstream os;
    if (kind == Kind::Annulus) {
        os << "annulus(" << r_in << "," << r_out << ")";
        if (dim > 1) os << "^" << dim;
        return os.str();
    }
    for (int i = 0; i < dim; ++i) {
        if (i) os << "x";
        os << "[" << box[i].first << "," << box[i].second << "]";
    }
    if (!focus.empty()) {
        os << "@(";
        for (int i = 0; i < dim; ++i) os << (i ? "," : "") << focus[i];
        os << ")";
    }
    return os.str();
}

namespace {

std::vector<double> uniform(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    v.back() = hi;
    return v;
}

// Tensor product of per-axis coordinate lists, appended to `out`.
void tensor(const std::vector<std::vector<double>>& axes, std::vector<double>& out) {
    const std::size_t d = axes.size();
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
        for (std::size_t a = 0; a < d; ++a) out.push_back(axes[a][idx[a]]);
        std::size_t a = d;
        while (a-- > 0) {
            if (++idx[a] < axes[a].size()) break;
            idx[a] = 0;
            if (a == 0) return;
        }
    }
}

}  // namespace

std::vector<double> CompactSet::lattice(double eps) const {
    validate();
    const int n = per_axis();
    std::vector<double> pts;
    if (kind == Kind::Box) {
        std::vector<std::vector<double>> axes;
        for (auto [lo, hi] : box) axes.push_back(uniform(lo, hi, n));
        tensor(axes, pts);
    } else if (dim == 1) {
        for (double v : uniform(-r_out, -r_in, n)) pts.push_back(v);
        for (double v : uniform(r_in, r_out, n)) pts.push_back(v);
    } else {
        std::vector<double> cube;
        tensor(std::vector<std::vector<double>>(dim, uniform(-r_out, r_out, n)), cube);
        for (std::size_t i = 0; i < cube.size(); i += dim) {
            std::vector<double> x(cube.begin() + i, cube.begin() + i + dim);
            if (contains(x)) pts.insert(pts.end(), x.begin(), x.end());
        }
        if (dim == 2) {
            for (double r : {r_in, r_out})
                for (int j = 0; j < 256; ++j) {
                    const double a = 2.0 * std::numbers::pi * j / 256;
                    pts.push_back(r * std::cos(a));
                    pts.push_back(r * std::sin(a));
                }
        }
    }
    if (eps > 0.0) {
        std::vector<double> patch;
        const double h = (focus_rho == 1.0 ? eps : std::pow(eps, focus_rho)) / 4;
        for (int j = -32; j <= 32; ++j) patch.push_back(j * h);
        std::vector<std::vector<double>> axes(dim, patch);
        if (!focus.empty())
            for (int a = 0; a < dim; ++a)
                for (double& v : axes[a]) v += focus[a];
        std::vector<double> grid;
        tensor(axes, grid);
        for (std::size_t i = 0; i < grid.size(); i += dim) {
            std::vector<double> x(grid.begin() + i, grid.begin() + i + dim);
            if (contains(x)) pts.insert(pts.end(), x.begin(), x.end());
        }
    }
    return pts;
}

}  // namespace epsnet
