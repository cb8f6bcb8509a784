#include "epsnet/error.hpp"
#include "epsnet/expr.hpp"

#include <cmath>

namespace epsnet {

namespace {

[[noreturn]] void domain(const char* msg, const Expr& e) {
    throw DomainError(msg, print(e, std::max(1, e.variable_extent())));
}

double eval(const Expr& e, const Binding& b, const Kernel* k);

double product(const Expr& e, const Binding& b, const Kernel* k) {
    double l = 0.0;
    try {
        l = eval(e.lhs(), b, k);
    } catch (const DomainError&) {
        if (eval(e.rhs(), b, k) == 0.0) return 0.0;
        throw;
    }
    if (l == 0.0) return 0.0;
    const double r = eval(e.rhs(), b, k);
    if (r == 0.0) return 0.0;
    return l * r;
}

double power(const Expr& e, double base) {
    const Rational& p = e.exponent();
    if (p.is_integer()) {
        if (base == 0.0 && p.num() < 0) domain("negative power of zero", e);
        return std::pow(base, static_cast<double>(p.num()));
    }
    if (base < 0.0) domain("fractional power of a negative value", e);
    if (base == 0.0) {
        if (p.num() < 0) domain("negative power of zero", e);
        return 0.0;
    }
    if (p.den() == 2) return std::pow(std::sqrt(base), static_cast<double>(p.num()));
    return std::pow(base, p.to_double());
}

const Kernel& need(const Kernel* k, const Expr& e) {
    if (!k) domain("no mollifier bound for kernel node", e);
    return *k;
}

double eval(const Expr& e, const Binding& b, const Kernel* k) {
    double v = 0.0;
    switch (e.op()) {
        case Op::Const:
            return e.value();
        case Op::Var:
            if (static_cast<std::size_t>(e.index()) >= b.x.size()) domain("variable outside the binding dimension", e);
            return b.x[e.index()];
        case Op::Eps:
            return b.eps;
        case Op::Add:
            v = eval(e.lhs(), b, k) + eval(e.rhs(), b, k);
            break;
        case Op::Sub:
            v = eval(e.lhs(), b, k) - eval(e.rhs(), b, k);
            break;
        case Op::Mul:
            v = product(e, b, k);
            break;
        case Op::Div: {
            const double num = eval(e.lhs(), b, k);
            const double den = eval(e.rhs(), b, k);
            if (den == 0.0) domain("division by zero", e);
            v = num / den;
            break;
        }
        case Op::Pow:
            v = power(e, eval(e.arg(), b, k));
            break;
        default: {
            const double a = eval(e.arg(), b, k);
            switch (e.op()) {
                case Op::Neg: v = -a; break;
                case Op::Sin: v = std::sin(a); break;
                case Op::Cos: v = std::cos(a); break;
                case Op::Exp: v = std::exp(a); break;
                case Op::Log:
                    if (!(a > 0.0)) domain("log of a non-positive value", e);
                    v = std::log(a);
                    break;
                case Op::Sqrt:
                    if (a < 0.0) domain("sqrt of a negative value", e);
                    v = std::sqrt(a);
                    break;
                case Op::Abs: v = std::abs(a); break;
                case Op::Bump: v = bump_derivative(e.index(), a); break;
                case Op::KernelDeriv: v = need(k, e).derivative(e.index(), a); break;
                case Op::KernelPrim: v = need(k, e).primitive(a); break;
                case Op::KernelMoment: v = need(k, e).incomplete_moment(e.index(), a); break;
                case Op::Step: v = step_value(a); break;
                default: domain("unknown node", e);
            }
        }
    }
    if (std::isnan(v)) domain("undefined value", e);
    return v;
}

}  // namespace

double evaluate(const Expr& e, const Binding& b, const Kernel* kernel) {
    if (!(b.eps > 0.0) || b.eps > 1.0) throw Error("eps must lie in (0, 1]");
    return eval(e, b, kernel);
}

}  // namespace epsnet
