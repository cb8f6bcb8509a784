#include "doctest.h"
#include "epsnet/algebra.hpp"
#include "epsnet/error.hpp"
#include "support/random_expr.hpp"

#include <cmath>

using namespace epsnet;

namespace {

const std::vector<CompactSet> unit{CompactSet::interval(-1, 1)};

}  // namespace

TEST_CASE("ring operations on representatives") {
    const Net a = Net::parse("x^2 + eps", 1), b = Net::parse("x^2", 1);
    CHECK(simplify_zero((a - b).base() - Expr::eps()));
    const Net c = scale(Net::parse("x^3", 1), GenNumber::parse("2 + eps"));
    EpsGrid g;
    std::vector<double> x{0.7};
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(c.eval(g.level(i), g.eps(i), x) == doctest::Approx((2 + g.eps(i)) * 0.343));
    CHECK_THROWS_AS(scale(b, GenNumber::tabulated(g, std::vector<double>(g.size(), 1.0))), GridMismatch);
    CHECK_THROWS_AS(Net::parse("x", 1) + Net::parse("x1", 2), PreconditionViolated);
}

TEST_CASE("overrides merge by union") {
    Net a = Net::parse("1", 1);
    a.set_override(8, parse("2", 1));
    Net b = Net::parse("x", 1);
    b.set_override(9, parse("0", 1));
    const Net s = a + b;
    CHECK(s.overrides().size() == 2);
    std::vector<double> x{3.0};
    CHECK(s.eval(7, 1.0 / 128, x) == 4.0);
    CHECK(s.eval(8, 1.0 / 256, x) == 5.0);
    CHECK(s.eval(9, 1.0 / 512, x) == 1.0);
}

TEST_CASE("ring laws on random nets") {
    for (unsigned seed = 0; seed < 30; ++seed) {
        testing::RandomExpr gen(seed, 1);
        const Net u(gen.make(3), 1), v(gen.make(3), 1), w(gen.make(3), 1);
        const Net l = (u + v) + w, r = u + (v + w);
        for (int t = 0; t < 5; ++t) {
            std::vector<double> x = gen.point();
            const double e = gen.eps();
            double lv = 0, rv = 0;
            try {
                lv = l.eval(10, e, x);
                rv = r.eval(10, e, x);
            } catch (const DomainError&) {
                continue;
            }
            // same leaves, same association of the doubles only up to rounding
            CHECK(lv == doctest::Approx(rv).epsilon(1e-12));
        }
        CHECK(structurally_zero(u * v - v * u));
    }
}

TEST_CASE("equals examples") {
    EpsGrid g;
    const Net u = Net::parse("eps^(-1)*bump((x - eps)/eps)", 1);
    const auto v = equals(u, Net::zero(1), {CompactSet::interval(-2, 2)}, 1);
    CHECK(v.outcome == Outcome::Fails);
    CHECK(v.slope == doctest::Approx(-1).epsilon(0.01));
    CHECK(equals(u, u, unit, 3).outcome == Outcome::ExactZero);
    const auto w = equals(Net::parse("x^2 + eps", 1), Net::parse("x^2", 1), unit, 2);
    CHECK(w.outcome == Outcome::Fails);
    CHECK(w.slope == doctest::Approx(1).epsilon(1e-9));
    const auto n = equals(Net::parse("x^2 + exp(-1/eps)", 1), Net::parse("x^2", 1), unit, 12);
    CHECK(n.outcome == Outcome::Negligible);
}

TEST_CASE("point values") {
    EpsGrid g;
    const Net u = Net::parse("eps^(-1)*bump((x - eps)/eps)", 1);
    const GenNumber at1 = eval_point(u, GenPoint::standard({1.0}));
    for (std::size_t i = g.tail_begin(); i < g.size(); ++i) CHECK(at1.values()[i] == 0.0);

    GenPoint p;
    p.coords = {GenNumber::parse("eps")};
    p.container = CompactSet::interval(0, 1);
    const GenNumber ate = eval_point(u, p);
    // direct substitution: bump(0)/eps
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(ate.values()[i] == doctest::Approx(std::exp(-1.0) / g.eps(i)));
    CHECK(nonneg_consistent(ate, 1).passed());

    const GenNumber five = eval_point(Net::parse("5", 1), GenPoint::standard({0.3}));
    for (double v : five.values()) CHECK(v == 5.0);

    // the container is enforced
    GenPoint q;
    q.coords = {GenNumber::parse("1/eps")};
    q.container = CompactSet::interval(0, 100);
    CHECK_THROWS_AS(eval_point(u, q), PreconditionViolated);
    // pierced domain
    CHECK_THROWS_AS(eval_point(Net::parse("abs(x)^(-1)", 1, Domain::pierced()), GenPoint::standard({0.0})), PiercedViolation);
}

TEST_CASE("point evaluation commutes with combine") {
    const Net u = Net::parse("sin(x) + eps*x^2", 1), v = Net::parse("exp(x*eps)", 1);
    GenPoint p;
    p.coords = {GenNumber::parse("0.5 + eps")};
    p.container = CompactSet::interval(0, 1);
    const auto s = eval_point(u + v, p).values(), a = eval_point(u, p).values(), b = eval_point(v, p).values();
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == a[i] + b[i]);
}

TEST_CASE("order relations") {
    CHECK(nonneg_consistent(GenNumber::parse("eps^2"), 12).passed());
    CHECK(!nonneg_consistent(GenNumber::parse("0 - eps^2"), 3).passed());
    CHECK(nonneg_consistent(GenNumber::parse("0 - exp(-1/eps)"), 12).passed());

    auto p = strictly_positive(GenNumber::parse("eps^2"), 12);
    CHECK(p.passed);
    CHECK(p.m0 == 3);
    CHECK(strictly_positive(GenNumber::constant(1), 12).m0 == 1);
    CHECK(!strictly_positive(GenNumber::parse("exp(-1/eps)"), 12).passed);
}

TEST_CASE("composition") {
    const Net u = Net::parse("sin(x) + eps*x", 1);
    const Net c = compose(u, Map::scale(2), CompactSet::interval(-1, 1));
    std::vector<double> x{0.3};
    CHECK(c.eval(8, 1.0 / 256, x) == doctest::Approx(std::sin(0.6) + 0.6 / 256));

    const Net inv = Net::parse("abs(x)^(-1)", 1, Domain::pierced());
    const Net t = compose(inv, Map::translate({3.0}), CompactSet::interval(-1, 1));
    CHECK(t.eval(8, 1.0 / 256, x) == doctest::Approx(1 / 3.3));
    CHECK(t.domain().is_pierced());
    CHECK(t.domain().centre(1)[0] == -3.0);
    CHECK_THROWS_AS(compose(inv, Map::scale(1), CompactSet::interval(-1, 1)), CBoundednessViolation);
    try {
        compose(inv, Map::scale(1), CompactSet::interval(-1, 1));
    } catch (const CBoundednessViolation& e) {
        CHECK(e.point().size() == 1);
        CHECK(e.eps() > 0);
    }
    // x -> x/eps is not c-bounded
    CHECK_THROWS_AS(compose(u, Map::gen_scale(GenNumber::parse("1/eps")), CompactSet::interval(-1, 1)), CBoundednessViolation);
    // general map
    const Net g = compose(u, Map::general({Net::parse("x^2 + eps", 1)}), CompactSet::interval(0, 1));
    CHECK(g.domain().kind == Domain::Kind::Local);
    CHECK(g.eval(6, 1.0 / 64, x) == doctest::Approx(std::sin(0.09 + 1.0 / 64) + (0.09 + 1.0 / 64) / 64));
}

TEST_CASE("derive commutes with translation") {
    for (unsigned seed = 0; seed < 20; ++seed) {
        testing::RandomExpr gen(seed, 1);
        const Net u(gen.make(3), 1);
        const Net a = derive(compose_unchecked(u, Map::translate({0.75})), 0);
        const Net b = compose_unchecked(derive(u, 0), Map::translate({0.75}));
        CHECK(structurally_equal(a.base(), b.base()));
    }
}

TEST_CASE("multi-indices") {
    const auto m = multi_indices(2, 2);
    REQUIRE(m.size() == 6);
    CHECK(m[0] == std::vector<int>{0, 0});
    CHECK(m[1] == std::vector<int>{1, 0});
    CHECK(m[3] == std::vector<int>{2, 0});
    CHECK(m[5] == std::vector<int>{0, 2});
}
