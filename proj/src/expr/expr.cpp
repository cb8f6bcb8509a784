#include "epsnet/expr.hpp"

#include "epsnet/error.hpp"

#include <algorithm>
#include <cstring>

namespace epsnet {

bool is_unary(Op op) { return op >= Op::Neg && op <= Op::Step; }
bool is_binary(Op op) { return op >= Op::Add && op <= Op::Div; }

struct Expr::Node {
    Op op = Op::Const;
    double value = 0.0;
    int index = 0;
    Rational exponent;
    Expr a;
    Expr b;
    // cached flags
    bool pierced = false;
    bool kernel = false;
    bool eps = false;
    std::uint32_t space_mask = 0;  // bit i: depends on variable i (i < 32)
    int extent = 0;
    std::size_t count = 1;
};

// A null node is the literal 0.
Expr::Expr() : node_(nullptr) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(int index) {
    if (index < 0 || index >= 32) throw Error("variable index out of range");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->index = index;
    n->space_mask = 1u << index;
    n->extent = index + 1;
    return Expr(std::move(n));
}

Expr Expr::eps() {
    auto n = std::make_shared<Node>();
    n->op = Op::Eps;
    n->eps = true;
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg, int order) {
    if (!is_unary(op)) throw Error("not a unary operator");
    if (order < 0) throw Error("negative derivative/moment order");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->index = order;
    n->pierced = arg.pierced();
    n->kernel = arg.uses_kernel() || op == Op::KernelDeriv || op == Op::KernelPrim || op == Op::KernelMoment;
    n->eps = arg.depends_on_eps();
    n->extent = arg.variable_extent();
    n->count = 1 + arg.node_count();
    n->space_mask = arg.node_ ? arg.node_->space_mask : 0;
    if ((op == Op::Log || op == Op::Sqrt || op == Op::Abs) && arg.depends_on_space()) n->pierced = true;
    n->a = std::move(arg);
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (!is_binary(op)) throw Error("not a binary operator");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->pierced = lhs.pierced() || rhs.pierced();
    n->kernel = lhs.uses_kernel() || rhs.uses_kernel();
    n->eps = lhs.depends_on_eps() || rhs.depends_on_eps();
    n->extent = std::max(lhs.variable_extent(), rhs.variable_extent());
    n->count = 1 + lhs.node_count() + rhs.node_count();
    n->space_mask = (lhs.node_ ? lhs.node_->space_mask : 0) | (rhs.node_ ? rhs.node_->space_mask : 0);
    n->a = std::move(lhs);
    n->b = std::move(rhs);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, Rational exponent) {
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->exponent = exponent;
    n->pierced = base.pierced() || (!exponent.is_integer() && base.depends_on_space());
    n->kernel = base.uses_kernel();
    n->eps = base.depends_on_eps();
    n->extent = base.variable_extent();
    n->count = 1 + base.node_count();
    n->space_mask = base.node_ ? base.node_->space_mask : 0;
    n->a = std::move(base);
    return Expr(std::move(n));
}

Op Expr::op() const { return node_ ? node_->op : Op::Const; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
int Expr::index() const { return node_ ? node_->index : 0; }

const Rational& Expr::exponent() const {
    static const Rational one(1);
    return node_ ? node_->exponent : one;
}

const Expr& Expr::arg() const {
    if (!node_ || !(is_unary(node_->op) || node_->op == Op::Pow)) throw Error("expression has no operand");
    return node_->a;
}

const Expr& Expr::lhs() const {
    if (!node_ || !is_binary(node_->op)) throw Error("expression is not binary");
    return node_->a;
}

const Expr& Expr::rhs() const {
    if (!node_ || !is_binary(node_->op)) throw Error("expression is not binary");
    return node_->b;
}

bool Expr::pierced() const { return node_ && node_->pierced; }
bool Expr::uses_kernel() const { return node_ && node_->kernel; }
bool Expr::depends_on_space() const { return node_ && node_->space_mask != 0; }
bool Expr::depends_on_eps() const { return node_ && node_->eps; }
bool Expr::depends_on(int axis) const {
    return node_ && axis >= 0 && axis < 32 && (node_->space_mask >> axis) & 1u;
}
int Expr::variable_extent() const { return node_ ? node_->extent : 0; }
std::size_t Expr::node_count() const { return node_ ? node_->count : 1; }

std::string Expr::str(int dim) const {
    if (dim <= 0) dim = std::max(1, variable_extent());
    return print(*this, dim);
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.same_node(b)) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
        case Op::Const: {
            const double x = a.value(), y = b.value();
            return std::memcmp(&x, &y, sizeof x) == 0;
        }
        case Op::Var:
            return a.index() == b.index();
        case Op::Eps:
            return true;
        case Op::Pow:
            return a.exponent() == b.exponent() && structurally_equal(a.arg(), b.arg());
        default:
            break;
    }
    if (is_unary(a.op())) return a.index() == b.index() && structurally_equal(a.arg(), b.arg());
    return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Op::Neg, a); }
Expr pow(const Expr& base, Rational exponent) { return Expr::power(base, exponent); }

Expr substitute(const Expr& e, std::span<const Expr> vars, const std::optional<Expr>& eps) {
    switch (e.op()) {
        case Op::Const:
            return e;
        case Op::Var:
            if (static_cast<std::size_t>(e.index()) < vars.size()) return vars[e.index()];
            return e;
        case Op::Eps:
            return eps ? *eps : e;
        case Op::Pow:
            return Expr::power(substitute(e.arg(), vars, eps), e.exponent());
        default:
            break;
    }
    if (is_unary(e.op())) return Expr::unary(e.op(), substitute(e.arg(), vars, eps), e.index());
    return Expr::binary(e.op(), substitute(e.lhs(), vars, eps), substitute(e.rhs(), vars, eps));
}

}  // namespace epsnet
