#include "epsnet/hermite_table.hpp"

#include "epsnet/error.hpp"

#include <algorithm>
#include <cmath>

namespace epsnet {

HermiteTable::HermiteTable(double lo, double h, std::vector<double> f, std::vector<double> d1, std::vector<double> d2)
    : lo_(lo), h_(h), f_(std::move(f)), d1_(std::move(d1)), d2_(std::move(d2)) {
    if (f_.size() < 2 || d1_.size() != f_.size() || d2_.size() != f_.size() || !(h_ > 0.0))
        throw Error("malformed Hermite table");
}

HermiteTable HermiteTable::build(double lo, double hi, int intervals,
                                 const std::function<void(double, double&, double&, double&)>& sample) {
    if (intervals < 1 || !(hi > lo)) throw Error("bad Hermite table range");
    const double h = (hi - lo) / intervals;
    std::vector<double> f(intervals + 1), d1(intervals + 1), d2(intervals + 1);
    for (int i = 0; i <= intervals; ++i) sample(lo + h * i, f[i], d1[i], d2[i]);
    return HermiteTable(lo, h, std::move(f), std::move(d1), std::move(d2));
}

double HermiteTable::operator()(double t) const {
    const std::size_t last = f_.size() - 1;
    double u = (t - lo_) / h_;
    if (!(u > 0.0)) return f_[0];
    if (u >= static_cast<double>(last)) return f_[last];
    const auto i = std::min(static_cast<std::size_t>(u), last - 1);
    const double s = u - static_cast<double>(i);
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h3 = 0.5 * (s3 - 2 * s4 + s5);
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
    return f_[i] * h0 + h_ * d1_[i] * h1 + h_ * h_ * d2_[i] * h2 + h_ * h_ * d2_[i + 1] * h3 + h_ * d1_[i + 1] * h4 +
           f_[i + 1] * h5;
}

}  // namespace epsnet
