#pragma once

// Immutable expression trees over spatial variables x1..xd and the
// regularization parameter eps. One Expr evaluated at a fixed eps is one
// member of a net of smooth functions.

#include "epsnet/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epsnet {

enum class Op : std::uint8_t {
    Const,
    Var,
    Eps,
    // unary
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Bump,          // k-th derivative of exp(-1/(1-t^2)) on |t|<1, 0 elsewhere
    KernelDeriv,   // rho<k>: k-th derivative of the bound mollifier
    KernelPrim,    // Rho: primitive of the mollifier, Rho(-inf) = 0
    KernelMoment,  // mom<j>: int_{-inf}^t s^j rho(s) ds, j >= 1
    Step,          // bstep: smooth step, 0 for t <= -1, 1 for t >= 1
    // binary
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // base ^ rational exponent
};

bool is_unary(Op op);
bool is_binary(Op op);

/// Mollifier access bound at evaluation time.
class Kernel {
public:
    virtual ~Kernel() = default;
    virtual double derivative(int k, double t) const = 0;
    virtual double primitive(double t) const = 0;
    virtual double incomplete_moment(int j, double t) const = 0;
};

struct Binding {
    std::span<const double> x;
    double eps = 1.0;
};

class Expr {
public:
    Expr();  // literal 0

    static Expr constant(double value);
    static Expr variable(int index);
    static Expr eps();
    static Expr unary(Op op, Expr arg, int order = 0);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr power(Expr base, Rational exponent);

    Op op() const;
    double value() const;
    int index() const;  // variable index, or derivative/moment order for kernel-like nodes
    const Rational& exponent() const;
    const Expr& arg() const;  // unary operand, or base of Pow
    const Expr& lhs() const;
    const Expr& rhs() const;

    bool is_constant() const { return op() == Op::Const; }
    bool is_constant(double v) const { return op() == Op::Const && value() == v; }

    /// True when a node that is not smooth at zero (log, sqrt, abs, non-integer
    /// power) has an argument depending on the spatial variables.
    bool pierced() const;
    bool uses_kernel() const;
    bool depends_on_space() const;
    bool depends_on_eps() const;
    bool depends_on(int axis) const;
    /// One past the largest variable index referenced (0 if none).
    int variable_extent() const;
    std::size_t node_count() const;

    std::string str(int dim = 0) const;

    bool same_node(const Expr& o) const { return node_ == o.node_; }

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, Rational exponent);

/// Constructors that fold the trivial identities 0+e, e*1, 0*e, e^1, -(-e)
/// and constant arithmetic. Differentiation builds its output with these, so
/// anything meant to match a derivative structurally should too.
namespace fold {
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr neg(const Expr& a);
Expr pow(const Expr& base, Rational exponent);
}  // namespace fold

/// Parse `source` for an ambient dimension `dim`. For dim == 1 the variable
/// is `x` (x1 is accepted as a synonym); otherwise x1..xd.
Expr parse(std::string_view source, int dim);

/// Fully parenthesised text that parses back to a structurally equal tree.
std::string print(const Expr& e, int dim);

/// Exact symbolic derivative along `axis`. `allow_singular` must be set to
/// differentiate abs / non-integer powers of spatial arguments (pierced domains).
Expr differentiate(const Expr& e, int axis, bool allow_singular = false);

/// Pure evaluation. A product with an exact-zero factor is zero even when the
/// other factor is undefined there; cutoff-guarded singular factors rely on this.
double evaluate(const Expr& e, const Binding& b, const Kernel* kernel = nullptr);

/// Replace variable i with `vars[i]` (when i < vars.size()) and eps with `eps`
/// when given.
Expr substitute(const Expr& e, std::span<const Expr> vars, const std::optional<Expr>& eps = std::nullopt);

/// True only if `e` normalizes to the literal 0 under the fixed rewrite set
/// (see simplify.cpp). False is not a claim that `e` is nonzero.
bool simplify_zero(const Expr& e);

// Building blocks shared with the step and kernel evaluators.
double bump_derivative(int k, double t);
double step_value(double t);
/// Integral of exp(-1/(1-t^2)) over (-1, 1).
double bump_mass();

}  // namespace epsnet
