#include "epsnet/error.hpp"
#include "epsnet/expr.hpp"

#include <charconv>
#include <cmath>

namespace epsnet {

namespace {

std::string number_text(double v) {
    if (!std::isfinite(v)) throw Error("cannot print a non-finite constant");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string name_of(const Expr& e) {
    switch (e.op()) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Abs: return "abs";
        case Op::Bump: return e.index() == 0 ? "bump" : "bump" + std::to_string(e.index());
        case Op::KernelDeriv: return "rho" + std::to_string(e.index());
        case Op::KernelPrim: return "Rho";
        case Op::KernelMoment: return "mom" + std::to_string(e.index());
        case Op::Step: return "bstep";
        default: return "?";
    }
}

void emit(const Expr& e, int dim, bool outer, std::string& out) {
    switch (e.op()) {
        case Op::Const: {
            const double v = e.value();
            if (std::signbit(v)) {
                out += "(-";
                out += number_text(-v);
                out += ')';
            } else {
                out += number_text(v);
            }
            return;
        }
        case Op::Var:
            if (dim == 1 && e.index() == 0) {
                out += 'x';
            } else {
                out += 'x';
                out += std::to_string(e.index() + 1);
            }
            return;
        case Op::Eps:
            out += "eps";
            return;
        case Op::Neg:
            out += "-(";
            emit(e.arg(), dim, true, out);
            out += ')';
            return;
        case Op::Pow: {
            const Expr& b = e.arg();
            const bool wrap = b.op() == Op::Pow;
            if (wrap) out += '(';
            emit(b, dim, false, out);
            if (wrap) out += ')';
            const Rational& p = e.exponent();
            out += '^';
            if (p.is_integer()) {
                out += std::to_string(p.num());
            } else {
                out += '(' + p.str() + ')';
            }
            return;
        }
        default:
            break;
    }
    if (is_unary(e.op())) {
        out += name_of(e);
        out += '(';
        emit(e.arg(), dim, true, out);
        out += ')';
        return;
    }
    const char* sym = e.op() == Op::Add ? " + " : e.op() == Op::Sub ? " - " : e.op() == Op::Mul ? "*" : "/";
    if (!outer) out += '(';
    // x^2/3 would read back as x^(2/3)
    const bool guard = e.op() == Op::Div && e.lhs().op() == Op::Pow;
    if (guard) out += '(';
    emit(e.lhs(), dim, false, out);
    if (guard) out += ')';
    out += sym;
    emit(e.rhs(), dim, false, out);
    if (!outer) out += ')';
}

}  // namespace

std::string print(const Expr& e, int dim) {
    std::string out;
    emit(e, dim, true, out);
    return out;
}

}  // namespace epsnet
