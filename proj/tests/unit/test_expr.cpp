#include "doctest.h"
#include "epsnet/error.hpp"
#include "epsnet/expr.hpp"
#include "support/random_expr.hpp"

#include <cmath>
#include <cstring>
#include <vector>

using namespace epsnet;

namespace {

double at(const Expr& e, std::vector<double> x, double eps) { return evaluate(e, Binding{x, eps}); }

// Independent oracle: trapezoid sum for the mass of exp(-1/(1-t^2)).
double bump_mass_trapezoid() {
    const int n = 200000;
    const double h = 2.0 / n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) {
        const double t = -1.0 + i * h;
        s += std::exp(-1.0 / (1.0 - t * t));
    }
    return s * h;
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
    const Expr u = parse("eps^-1 * bump((x - eps)/eps)", 1);
    CHECK(u.op() == Op::Mul);
    CHECK(u.lhs().op() == Op::Pow);
    CHECK(u.lhs().exponent() == Rational(-1));
    CHECK(u.rhs().op() == Op::Bump);
    CHECK(u.depends_on_eps());
    CHECK_FALSE(u.pierced());

    const Expr z = parse("0", 1);
    CHECK(z.is_constant(0.0));

    const Expr s = parse("x^2 + eps", 1);
    CHECK(s.op() == Op::Add);
    CHECK(s.lhs().op() == Op::Pow);
    CHECK(s.rhs().op() == Op::Eps);
}

TEST_CASE("parse grammar details") {
    CHECK(parse("x1", 1).op() == Op::Var);
    CHECK(parse("x2*x1", 2).rhs().index() == 0);
    CHECK(parse("-3", 1).value() == -3.0);
    CHECK(parse("2.5e-3", 1).value() == 2.5e-3);
    CHECK(parse("abs(x)^1/2", 1).exponent() == Rational(1, 2));
    CHECK(parse("abs(x)^(-3/2)", 1).exponent() == Rational(-3, 2));
    CHECK(parse("abs(x)^0.25", 1).exponent() == Rational(1, 4));
    CHECK(parse("rho3(x)", 1).index() == 3);
    CHECK(parse("mom2(x)", 1).op() == Op::KernelMoment);
    CHECK(parse("Rho(x)", 1).op() == Op::KernelPrim);
    CHECK(parse("bstep(x)", 1).op() == Op::Step);
    CHECK(parse("log(x)", 1).pierced());
    CHECK_FALSE(parse("log(2 + eps)", 1).pierced());
    CHECK(parse("  x  *  eps ", 1).op() == Op::Mul);
}

TEST_CASE("parse errors carry offsets and expectations") {
    try {
        parse("x^^2", 1);
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK_FALSE(e.expected().empty());
    }
    CHECK_THROWS_AS(parse("y + 1", 1), ParseError);
    CHECK_THROWS_AS(parse("x3", 2), ParseError);
    CHECK_THROWS_AS(parse("x", 2), ParseError);
    CHECK_THROWS_AS(parse("sin(x, x)", 1), ParseError);
    CHECK_THROWS_AS(parse("(x + 1", 1), ParseError);
    CHECK_THROWS_AS(parse("x 1", 1), ParseError);
}

TEST_CASE("differentiate examples") {
    const Expr d = differentiate(parse("x^2 + eps", 1), 0);
    CHECK(structurally_equal(d, parse("2*x", 1)));

    const Expr r = differentiate(parse("Rho(x/eps)", 1), 0);
    CHECK(structurally_equal(r, parse("(1/eps)*rho0(x/eps)", 1)));

    const Expr b = differentiate(parse("bump(x)", 1), 0);
    CHECK(at(b, {2.0}, 1.0) == 0.0);

    CHECK(structurally_equal(differentiate(parse("rho2(x)", 1), 0), parse("rho3(x)", 1)));
    CHECK_THROWS_AS(differentiate(parse("abs(x)", 1), 0), DomainError);
    CHECK_THROWS_AS(differentiate(parse("abs(x)^(1/2)", 1), 0), DomainError);
    CHECK_NOTHROW(differentiate(parse("abs(x)^(1/2)", 1), 0, true));
    CHECK(differentiate(parse("eps*x2", 2), 0).is_constant(0.0));
}

TEST_CASE("evaluate examples") {
    CHECK(at(parse("x^2+eps", 1), {2.0}, 0.5) == 4.5);
    CHECK(at(parse("eps^-1 * bump((x-eps)/eps)", 1), {1.0}, 0.25) == 0.0);
    CHECK(at(parse("bump(x)", 1), {0.0}, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(at(parse("log(x)", 1), {0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(at(parse("abs(x)^-1", 1), {0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(at(parse("rho0(x)", 1), {0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(at(parse("x", 1), {0.0}, 0.0), Error);
    // an exact-zero factor absorbs an undefined one
    CHECK(at(parse("bstep(x - 2) * abs(x)^-1", 1), {0.0}, 1.0) == 0.0);
    CHECK(std::isinf(at(parse("exp(1/eps)", 1), {0.0}, 1.0 / 1024)));
    try {
        at(parse("1 + log(x - 1)", 1), {0.5}, 1.0);
        FAIL("no throw");
    } catch (const DomainError& e) {
        CHECK(e.subexpression() == "log(x - 1)");
    }
}

TEST_CASE("bump derivatives match finite differences") {
    for (int k = 0; k < 6; ++k)
        for (double t : {-0.9, -0.5, 0.0, 0.3, 0.77}) {
            const double h = 1e-5;
            const double fd = (bump_derivative(k, t + h) - bump_derivative(k, t - h)) / (2 * h);
            CHECK(bump_derivative(k + 1, t) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        }
    CHECK(bump_derivative(3, 1.0) == 0.0);
    CHECK(bump_derivative(3, -1.5) == 0.0);
}

TEST_CASE("smooth step") {
    CHECK(bump_mass() == doctest::Approx(bump_mass_trapezoid()).epsilon(1e-9));
    CHECK(bump_mass() == doctest::Approx(0.443993816168).epsilon(1e-11));
    CHECK(step_value(-1.0) == 0.0);
    CHECK(step_value(1.0) == 1.0);
    CHECK(step_value(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    for (double t : {-0.8, -0.3, 0.1, 0.6}) {
        CHECK(step_value(t) + step_value(-t) == doctest::Approx(1.0).epsilon(1e-14));
        const double h = 1e-5;
        const double fd = (step_value(t + h) - step_value(t - h)) / (2 * h);
        CHECK(fd == doctest::Approx(bump_derivative(0, t) / bump_mass()).epsilon(1e-7));
    }
}

TEST_CASE("simplify_zero examples") {
    CHECK(simplify_zero(parse("x^3 - x^3", 1)));
    for (double lam : {0.5, 2.0, 3.0}) {
        const Expr c = Expr::constant(lam);
        const Expr x = Expr::variable(0);
        CHECK(simplify_zero(pow(c * x, Rational(2)) - pow(c, Rational(2)) * pow(x, Rational(2))));
    }
    CHECK_FALSE(simplify_zero(parse("(x^2 + eps) - x^2", 1)));
    CHECK(simplify_zero(parse("0*sin(x)", 1)));
    CHECK(simplify_zero(parse("(2+eps)*x^3 - x^3*(eps+2)", 1)));
    CHECK(simplify_zero(parse("abs(x)^-1 - abs(x/abs(x))^-1*abs(x)^-1", 1)));
    CHECK(simplify_zero(parse("x*((-1)*abs(x)^-2*(x/abs(x))) + abs(x)^-1", 1)));
    CHECK(simplify_zero(parse("abs(x)^(1/2)*abs(x)^(1/2) - x*x/abs(x)", 1)));
    CHECK(simplify_zero(parse("eps^(1/2)*eps^(1/2) - eps", 1)));
    CHECK(simplify_zero(parse("(x+1)^2 - x^2 - 2*x - 1", 1)));
    CHECK(simplify_zero(parse("sin(2*x) - sin(x*2)", 1)));
    CHECK_FALSE(simplify_zero(parse("sin(x)^2 + cos(x)^2 - 1", 1)));
    CHECK_FALSE(simplify_zero(parse("x/(x-x)", 1)));
}

TEST_CASE("symbolic derivatives agree with central differences") {
    testing::RandomExpr gen(20240611, 2);
    int checked = 0;
    while (checked < 50) {
        const Expr e = gen.make(4);
        const int axis = gen.axis();
        const Expr d = differentiate(e, axis);
        std::vector<double> x = gen.point();
        const double eps = gen.eps();
        const double sym = evaluate(d, Binding{x, eps});
        const double h = 1e-5;
        auto shifted = [&](double s) {
            std::vector<double> y = x;
            y[axis] += s;
            return evaluate(e, Binding{y, eps});
        };
        const double fd = (shifted(h) - shifted(-h)) / (2 * h);
        INFO(print(e, 2));
        CHECK(std::abs(sym - fd) <= 1e-6 * (1 + std::abs(sym)));
        ++checked;
    }
}

TEST_CASE("print then parse is the identity") {
    testing::RandomExpr gen(77, 2);
    for (int i = 0; i < 200; ++i) {
        const Expr e = gen.make(5);
        const std::string text = print(e, 2);
        INFO(text);
        CHECK(structurally_equal(parse(text, 2), e));
    }
    const std::vector<std::string> samples = {"eps^-1 * bump((x - eps)/eps)", "-(x)^2", "abs(x)^(1/2)*(1 + eps*sin(abs(x)))",
                                              "(-3)*x - -2", "mom3(x/eps)*eps^3", "bump2(x)",
                                              "x^2/(3)", "(x^2)/3 + x^2/eps"};
    for (const auto& s : samples) {
        const Expr e = parse(s, 1);
        CHECK(structurally_equal(parse(print(e, 1), 1), e));
    }
}

TEST_CASE("evaluation is deterministic") {
    testing::RandomExpr gen(5, 1);
    for (int i = 0; i < 20; ++i) {
        const Expr e = gen.make(5);
        const std::vector<double> x{0.37};
        const double a = evaluate(e, Binding{x, 0.3});
        const double b = evaluate(parse(print(e, 1), 1), Binding{x, 0.3});
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    }
}
