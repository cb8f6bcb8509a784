#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace epsnet {

/// Exact exponent p/q with q > 0 and gcd(p, q) = 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    /// Closest convergent of the continued fraction of `value` within `tol`.
    static Rational approximate(double value, double tol = 1e-12);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const { return Rational(-num_, den_); }

    bool operator==(const Rational&) const = default;
    std::strong_ordering operator<=>(const Rational& o) const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace epsnet
