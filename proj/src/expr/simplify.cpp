// Zero test by normal form. Every expression is rewritten as a sum of
// coefficient * monomial, where a monomial is a product of atoms raised to
// rational powers. The rewrite set is fixed:
//
//   - constant folding, including elementary functions of constants;
//   - like terms are collected; a coefficient that cancels to within 4 ulp of
//     the magnitudes that produced it is dropped;
//   - products distribute, integer powers (<= 8) of sums are expanded;
//   - exponents of the same atom add. Fractional exponents are only combined
//     on atoms known to be positive (eps, abs(.), exp(.), sqrt(.)); any other
//     fractional power becomes an opaque positive atom;
//   - abs distributes over a monomial and abs of a positive atom is the
//     atom; an even power a^(2n) of any other atom is stored as abs(a)^(2n);
//   - division by a single monomial multiplies by its inverse; division by a
//     sum keeps the sum as an atom with exponent -1.
//
// Any other node (sin, bump, rho<k>, ...) is an atom keyed by its name and the
// normal form of its argument. Nothing else is attempted.

#include "epsnet/error.hpp"
#include "epsnet/expr.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace epsnet {

namespace {

struct GiveUp {};

constexpr std::size_t kTermCap = 20000;
constexpr int kMaxExpand = 8;

using Monomial = std::map<std::string, Rational>;

struct Term {
    Monomial mono;
    double coeff = 0.0;
    double mag = 0.0;  // largest |addend| that went into coeff
};

using Poly = std::map<std::string, Term>;

std::string num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string mono_key(const Monomial& m) {
    std::string k;
    for (const auto& [atom, p] : m) {
        if (!k.empty()) k += '*';
        k += atom;
        if (p != Rational(1)) k += "^" + p.str();
    }
    return k;
}

class Normalizer {
public:
    Poly run(const Expr& e) { return clean(norm(e)); }

private:
    std::map<std::string, bool> atoms_;  // key -> known positive

    std::string atom(std::string key, bool positive) {
        atoms_.try_emplace(key, positive);
        return key;
    }

    bool positive(const std::string& key) const { return atoms_.at(key); }

    static Poly constant(double c) {
        Poly p;
        if (c != 0.0) p[""] = Term{{}, c, std::abs(c)};
        return p;
    }

    static Poly single(const std::string& a, Rational p = Rational(1)) {
        Monomial m{{a, p}};
        Poly out;
        out[mono_key(m)] = Term{m, 1.0, 1.0};
        return out;
    }

    static void accumulate(Poly& into, const Monomial& m, double c, double mag) {
        if (c == 0.0) return;
        const std::string k = mono_key(m);
        auto it = into.find(k);
        if (it == into.end()) {
            into.emplace(k, Term{m, c, mag});
        } else {
            it->second.coeff += c;
            it->second.mag = std::max(it->second.mag, mag);
            if (cancelled(it->second)) into.erase(it);
        }
        if (into.size() > kTermCap) throw GiveUp{};
    }

    static bool cancelled(const Term& t) {
        return std::abs(t.coeff) <= 4.0 * std::numeric_limits<double>::epsilon() * t.mag;
    }

    // Drop cancelled terms; move even powers of a non-positive atom a into abs(a).
    Poly clean(const Poly& p) {
        Poly out;
        for (const auto& [k, t] : p) {
            if (cancelled(t)) continue;
            Monomial m;
            for (const auto& [a, e] : t.mono) {
                if (positive(a) || !e.is_integer()) {
                    add_exp(m, a, e);
                    continue;
                }
                const std::int64_t r = ((e.num() % 2) + 2) % 2;
                if (r != 0) add_exp(m, a, Rational(r));
                if (e.num() != r) add_exp(m, atom("abs(" + a + ")", true), Rational(e.num() - r));
            }
            accumulate(out, m, t.coeff, t.mag);
        }
        return out;
    }

    static void add_exp(Monomial& m, const std::string& a, Rational e) {
        auto it = m.find(a);
        if (it == m.end()) {
            if (e != Rational(0)) m.emplace(a, e);
            return;
        }
        it->second = it->second + e;
        if (it->second == Rational(0)) m.erase(it);
    }

    Poly add(const Poly& a, const Poly& b, double sign) {
        Poly out = a;
        for (const auto& [k, t] : b) accumulate(out, t.mono, sign * t.coeff, t.mag);
        return out;
    }

    Poly mul(const Poly& a, const Poly& b) {
        if (a.size() * b.size() > kTermCap) throw GiveUp{};
        Poly out;
        for (const auto& [ka, ta] : a)
            for (const auto& [kb, tb] : b) {
                Monomial m = ta.mono;
                for (const auto& [atom, e] : tb.mono) add_exp(m, atom, e);
                const double c = ta.coeff * tb.coeff;
                accumulate(out, m, c, std::abs(c));
            }
        return out;
    }

    static bool is_constant(const Poly& p, double& c) {
        if (p.empty()) {
            c = 0.0;
            return true;
        }
        if (p.size() == 1 && p.begin()->second.mono.empty()) {
            c = p.begin()->second.coeff;
            return true;
        }
        return false;
    }

    std::string canon(const Poly& raw) {
        const Poly p = clean(raw);
        if (p.empty()) return "0";
        std::string s;
        for (const auto& [k, t] : p) {
            if (!s.empty()) s += '+';
            s += num(t.coeff);
            if (!k.empty()) s += '*' + k;
        }
        return s;
    }

    // Atom standing for a whole non-monomial polynomial.
    std::string sum_atom(const Poly& p) { return atom("(" + canon(p) + ")", false); }

    Poly power(const Poly& base, const Rational& p) {
        if (p == Rational(0)) return constant(1.0);
        double c = 0.0;
        if (is_constant(base, c)) {
            if (c == 0.0 && p.num() < 0) throw GiveUp{};
            if (c < 0.0 && !p.is_integer()) throw GiveUp{};
            return constant(std::pow(c, p.to_double()));
        }
        if (base.size() == 1) {
            const Term& t = base.begin()->second;
            bool ok = p.is_integer() || t.coeff > 0.0;
            for (const auto& [a, e] : t.mono) ok = ok && (p.is_integer() || positive(a));
            if (ok) {
                Monomial m;
                for (const auto& [a, e] : t.mono) add_exp(m, a, e * p);
                const double coeff = std::pow(t.coeff, p.to_double());
                Poly out;
                accumulate(out, m, coeff, std::abs(coeff));
                return out;
            }
        }
        if (p.is_integer() && p.num() > 0 && p.num() <= kMaxExpand && base.size() > 1) {
            Poly out = base;
            for (std::int64_t i = 1; i < p.num(); ++i) out = mul(out, base);
            return out;
        }
        if (p.is_integer()) return single(sum_atom(base), p);
        return single(atom("pow(" + canon(base) + "," + p.str() + ")", true));
    }

    Poly absolute(const Poly& a) {
        double c = 0.0;
        if (is_constant(a, c)) return constant(std::abs(c));
        if (a.size() > 1) return single(atom("abs(" + canon(a) + ")", true));
        const Term& t = a.begin()->second;
        Monomial m;
        for (const auto& [k, e] : t.mono) {
            if (positive(k)) {
                add_exp(m, k, e);
            } else {
                add_exp(m, atom("abs(" + k + ")", true), e);
            }
        }
        Poly out;
        accumulate(out, m, std::abs(t.coeff), std::abs(t.coeff));
        return out;
    }

    Poly function(const Expr& e, const Poly& a) {
        double c = 0.0;
        const bool k = is_constant(a, c);
        switch (e.op()) {
            case Op::Sin:
                if (k) return constant(std::sin(c));
                break;
            case Op::Cos:
                if (k) return constant(std::cos(c));
                break;
            case Op::Exp:
                if (k) return constant(std::exp(c));
                return single(atom("exp(" + canon(a) + ")", true));
            case Op::Log:
                if (k) {
                    if (!(c > 0.0)) throw GiveUp{};
                    return constant(std::log(c));
                }
                break;
            case Op::Sqrt:
                if (k) {
                    if (c < 0.0) throw GiveUp{};
                    return constant(std::sqrt(c));
                }
                return single(atom("sqrt(" + canon(a) + ")", true));
            case Op::Bump:
                if (k) return constant(bump_derivative(e.index(), c));
                break;
            case Op::Step:
                if (k) return constant(step_value(c));
                break;
            default:
                break;
        }
        std::string name = print(Expr::unary(e.op(), Expr::constant(0.0), e.index()), 1);
        name.resize(name.find('('));
        return single(atom(name + "(" + canon(a) + ")", false));
    }

    Poly norm(const Expr& e) {
        switch (e.op()) {
            case Op::Const:
                if (!std::isfinite(e.value())) throw GiveUp{};
                return constant(e.value());
            case Op::Var:
                return single(atom("x" + std::to_string(e.index() + 1), false));
            case Op::Eps:
                return single(atom("eps", true));
            case Op::Neg:
                return add(Poly{}, norm(e.arg()), -1.0);
            case Op::Add:
                return add(norm(e.lhs()), norm(e.rhs()), 1.0);
            case Op::Sub:
                return add(norm(e.lhs()), norm(e.rhs()), -1.0);
            case Op::Mul:
                return mul(norm(e.lhs()), norm(e.rhs()));
            case Op::Div: {
                Poly num = norm(e.lhs());
                if (num.empty()) return num;
                Poly den = norm(e.rhs());
                if (den.empty()) throw GiveUp{};
                if (den.size() == 1) return mul(num, power(den, Rational(-1)));
                return mul(num, single(sum_atom(den), Rational(-1)));
            }
            case Op::Pow:
                return power(norm(e.arg()), e.exponent());
            case Op::Abs:
                return absolute(norm(e.arg()));
            default:
                return function(e, norm(e.arg()));
        }
    }
};

}  // namespace

bool simplify_zero(const Expr& e) {
    if (e.is_constant()) return e.value() == 0.0;
    try {
        return Normalizer().run(e).empty();
    } catch (const GiveUp&) {
        return false;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace epsnet
