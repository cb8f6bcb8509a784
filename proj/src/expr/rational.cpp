#include "epsnet/rational.hpp"

#include "epsnet/error.hpp"

#include <cmath>
#include <numeric>

namespace epsnet {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g ? num / g : num;
    den_ = g ? den / g : den;
}

Rational Rational::approximate(double value, double tol) {
    if (!std::isfinite(value)) throw Error("cannot approximate a non-finite exponent");
    // Continued-fraction convergents h/k.
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double x = value;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        if (std::abs(a) > 1e15) break;
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0;
        const std::int64_t k2 = ai * k1 + k0;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (std::abs(value - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) break;
        const double frac = x - a;
        if (frac == 0.0) break;
        x = 1.0 / frac;
        if (k1 > (std::int64_t{1} << 40)) break;
    }
    return Rational(h1, k1);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    // Denominators are positive, so cross-multiplication preserves order.
    return num_ * o.den_ <=> o.num_ * den_;
}

}  // namespace epsnet
