#include "epsnet/error.hpp"
#include "epsnet/expr.hpp"

#include <cmath>

namespace epsnet {

namespace fold {

Expr add(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
    return a + b;
}

Expr sub(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return neg(b);
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
    return a - b;
}

Expr mul(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr();
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
    return a * b;
}

Expr div(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) throw DomainError("division by literal zero", print(a, std::max(1, a.variable_extent())) + "/0");
    if (a.is_constant(0.0)) return Expr();
    if (b.is_constant(1.0)) return a;
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() / b.value());
    return a / b;
}

Expr neg(const Expr& a) {
    if (a.is_constant()) return Expr::constant(-a.value());
    if (a.op() == Op::Neg) return a.arg();
    return -a;
}

Expr pow(const Expr& base, Rational exponent) {
    if (exponent == Rational(1)) return base;
    if (exponent == Rational(0)) return Expr::constant(1.0);
    if (base.is_constant() && exponent.is_integer()) {
        const double v = std::pow(base.value(), static_cast<double>(exponent.num()));
        if (std::isfinite(v)) return Expr::constant(v);
    }
    return epsnet::pow(base, exponent);
}

}  // namespace fold

namespace {

[[noreturn]] void singular(const Expr& e, const char* what) {
    throw DomainError(std::string("cannot differentiate ") + what + " outside a pierced domain",
                      print(e, std::max(1, e.variable_extent())));
}

}  // namespace

Expr differentiate(const Expr& e, int axis, bool allow_singular) {
    if (!e.depends_on(axis)) return Expr();
    using namespace fold;
    const Op op = e.op();
    switch (op) {
        case Op::Var:
            return Expr::constant(1.0);
        case Op::Add:
            return add(differentiate(e.lhs(), axis, allow_singular), differentiate(e.rhs(), axis, allow_singular));
        case Op::Sub:
            return sub(differentiate(e.lhs(), axis, allow_singular), differentiate(e.rhs(), axis, allow_singular));
        case Op::Mul: {
            const Expr& a = e.lhs();
            const Expr& b = e.rhs();
            if (!a.depends_on(axis)) return mul(a, differentiate(b, axis, allow_singular));
            if (!b.depends_on(axis)) return mul(differentiate(a, axis, allow_singular), b);
            return add(mul(differentiate(a, axis, allow_singular), b), mul(a, differentiate(b, axis, allow_singular)));
        }
        case Op::Div: {
            const Expr& a = e.lhs();
            const Expr& b = e.rhs();
            if (!b.depends_on(axis)) return div(differentiate(a, axis, allow_singular), b);
            const Expr num = sub(mul(differentiate(a, axis, allow_singular), b), mul(a, differentiate(b, axis, allow_singular)));
            return div(num, fold::pow(b, Rational(2)));
        }
        case Op::Pow: {
            const Expr& b = e.arg();
            const Rational& p = e.exponent();
            if (!p.is_integer() && !allow_singular) singular(e, "a non-integer power");
            const Expr outer = mul(Expr::constant(p.to_double()), fold::pow(b, p - Rational(1)));
            return mul(outer, differentiate(b, axis, allow_singular));
        }
        default:
            break;
    }
    const Expr& a = e.arg();
    const Expr da = differentiate(a, axis, allow_singular);
    switch (op) {
        case Op::Neg:
            return neg(da);
        case Op::Sin:
            return mul(da, Expr::unary(Op::Cos, a));
        case Op::Cos:
            return mul(da, neg(Expr::unary(Op::Sin, a)));
        case Op::Exp:
            return mul(da, e);
        case Op::Log:
            return div(da, a);
        case Op::Sqrt:
            return div(da, mul(Expr::constant(2.0), e));
        case Op::Abs:
            if (!allow_singular) singular(e, "abs");
            return mul(da, div(a, e));
        case Op::Bump:
            return mul(da, Expr::unary(Op::Bump, a, e.index() + 1));
        case Op::KernelDeriv:
            return mul(da, Expr::unary(Op::KernelDeriv, a, e.index() + 1));
        case Op::KernelPrim:
            return mul(da, Expr::unary(Op::KernelDeriv, a, 0));
        case Op::KernelMoment:
            return mul(da, mul(fold::pow(a, Rational(e.index())), Expr::unary(Op::KernelDeriv, a, 0)));
        case Op::Step:
            return mul(da, mul(Expr::constant(1.0 / bump_mass()), Expr::unary(Op::Bump, a)));
        default:
            throw Error("differentiate: unexpected node");
    }
}

}  // namespace epsnet
