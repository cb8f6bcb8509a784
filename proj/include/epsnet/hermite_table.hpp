#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace epsnet {

/// Piecewise quintic Hermite interpolant on a uniform grid, built from
/// values and first/second derivatives at the nodes. C2 across nodes.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(double lo, double h, std::vector<double> f, std::vector<double> d1, std::vector<double> d2);

    /// Sample f, f', f'' at lo + i*h for i = 0..n.
    static HermiteTable build(double lo, double hi, int intervals, const std::function<void(double, double&, double&, double&)>& sample);

    double lo() const { return lo_; }
    double hi() const { return lo_ + h_ * static_cast<double>(f_.size() - 1); }
    double step() const { return h_; }
    std::size_t nodes() const { return f_.size(); }

    /// Interpolated value; t is clamped to [lo, hi].
    double operator()(double t) const;

    const std::vector<double>& values() const { return f_; }
    const std::vector<double>& first() const { return d1_; }
    const std::vector<double>& second() const { return d2_; }

private:
    double lo_ = 0.0;
    double h_ = 1.0;
    std::vector<double> f_, d1_, d2_;
};

}  // namespace epsnet
