#pragma once

// Random smooth expressions for property tests. Every generated tree is
// defined and smooth for x in [-1, 1]^d and eps in (0, 1].

#include "epsnet/expr.hpp"

#include <random>

namespace epsnet::testing {

class RandomExpr {
public:
    RandomExpr(std::uint64_t seed, int dim) : rng_(seed), dim_(dim) {}

    Expr make(int depth) {
        if (depth <= 0 || coin(0.2)) return leaf();
        switch (pick(11)) {
            case 0: return make(depth - 1) + make(depth - 1);
            case 1: return make(depth - 1) - make(depth - 1);
            case 2: return make(depth - 1) * make(depth - 1);
            case 3: return Expr::unary(Op::Sin, make(depth - 1));
            case 4: return Expr::unary(Op::Cos, make(depth - 1));
            case 5: return Expr::unary(Op::Exp, Expr::unary(Op::Sin, make(depth - 1)));
            case 6: return pow(bounded(depth - 1), Rational(2 + pick(2)));
            case 7: return make(depth - 1) / (Expr::constant(1.5) + Expr::unary(Op::Cos, make(depth - 1)));
            case 8: return Expr::unary(Op::Sqrt, Expr::constant(1.0) + pow(bounded(depth - 1), Rational(2)));
            case 9: return Expr::unary(Op::Log, Expr::constant(2.0) + Expr::unary(Op::Sin, make(depth - 1)));
            default: return Expr::unary(Op::Bump, Expr::unary(Op::Sin, make(depth - 1)) * Expr::constant(0.5));
        }
    }

    std::vector<double> point() {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> x(dim_);
        for (auto& v : x) v = u(rng_);
        return x;
    }

    double eps() { return std::uniform_real_distribution<double>(0.1, 1.0)(rng_); }
    int axis() { return pick(dim_); }

private:
    std::mt19937_64 rng_;
    int dim_;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

    Expr bounded(int depth) { return Expr::unary(Op::Sin, make(depth)); }

    Expr leaf() {
        switch (pick(4)) {
            case 0: return Expr::eps();
            case 1: return Expr::constant(std::uniform_real_distribution<double>(-2.0, 2.0)(rng_));
            default: return Expr::variable(pick(dim_));
        }
    }
};

}  // namespace epsnet::testing
