#include "doctest.h"
#include "epsnet/algebra.hpp"
#include "epsnet/analysis.hpp"
#include "epsnet/embedding.hpp"
#include "epsnet/error.hpp"
#include "epsnet/quadrature.hpp"

#include <cmath>

using namespace epsnet;

namespace {

template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
    return s * h / 3;
}

}  // namespace

TEST_CASE("quadrature") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi).value == doctest::Approx(2.0).epsilon(1e-13));
    const double br[] = {0.0};
    const auto r = integrate([](double x) { return std::abs(x); }, -1, 2, br);
    CHECK(r.value == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(r.converged);
    CHECK_THROWS_AS(integrate([](double) { return NAN; }, 0, 1), DomainError);
}

TEST_CASE("test functions") {
    const auto phi = TestFunction::make({0.0}, 1.0);
    CHECK(!phi.away);
    CHECK(simpson([&](double x) { return phi(std::span(&x, 1)); }, -1, 1, 20000) == doctest::Approx(1.0).epsilon(1e-10));
    const auto psi = TestFunction::make({1.5}, 0.5, "1 + x");
    CHECK(psi.away);
    double t = 1.7;
    CHECK(psi(std::span(&t, 1)) == doctest::Approx(evaluate(psi.expr(), Binding{std::span(&t, 1), 1.0})));
    const auto phi2 = TestFunction::make({0.5, -0.5}, 0.25);
    CHECK(phi2.away);
    CHECK_THROWS_AS(TestFunction::make({0.0}, 0.0), PreconditionViolated);
}

TEST_CASE("pairing examples") {
    auto rho = Mollifier::build(4);
    const auto phi = TestFunction::make({0.0}, 1.0);
    double zero = 0.0;
    const double phi0 = phi(std::span(&zero, 1));

    const Net d = embed(DistributionSpec::delta(0), rho);
    const PairingSequence s = pair(d, phi);
    CHECK(s.grid.k_max == 14);
    CHECK(!s.any_flagged());
    // high-resolution oracle at three eps values
    for (std::size_t i : {0u, 2u, 4u}) {
        const double eps = s.grid.eps(i);
        const double want = simpson([&](double y) { return rho->value(y) * phi(std::span(&(y = y * eps), 1)); }, -12, 12, 200000);
        CHECK(s.values[i] == doctest::Approx(want).epsilon(1e-10));
    }
    // error against phi(0): with M = 4 it is O(eps^6), below round-off on the tail
    DecaySamples err;
    err.grid = s.grid;
    for (double v : s.values) err.values.push_back(std::abs(v - phi0));
    CHECK(verdict_negligible(err, 4 - 0.5).passed());
    // measurable slopes on a coarser grid
    for (int M : {0, 2}) {
        const EpsGrid coarse{2.0, 2, 9};
        const PairingSequence c = pair(embed(DistributionSpec::delta(0), Mollifier::build(M)), phi, coarse);
        DecaySamples e;
        e.grid = coarse;
        for (double v : c.values) e.values.push_back(std::abs(v - phi0));
        CHECK(fit_order(e).slope >= M - 0.5);
    }

    const Net q = Net::parse("x^2 + eps", 1);
    const PairingSequence sq = pair(q, phi);
    const double m2 = simpson([&](double x) { return x * x * phi(std::span(&x, 1)); }, -1, 1, 200000);
    for (std::size_t i = 0; i < sq.grid.size(); ++i) CHECK(sq.values[i] == doctest::Approx(m2 + sq.grid.eps(i)).epsilon(1e-11));

    for (double v : pair(Net::zero(1), phi).values) CHECK(v == 0.0);

    CHECK_THROWS_AS(pair(Net::parse("abs(x)^(-1)", 1, Domain::pierced()), phi), PiercedViolation);
    CHECK_NOTHROW(pair(Net::parse("abs(x)^(-1)", 1, Domain::pierced()), TestFunction::make({1.5}, 0.5)));
}

TEST_CASE("pairing is linear") {
    auto rho = Mollifier::build(4);
    const Net u = embed(DistributionSpec::delta(1), rho), v = Net::parse("sin(x)*eps + x", 1);
    const auto phi = TestFunction::make({0.25}, 1.0, "1 + x^2");
    const auto a = pair(u, phi).values, b = pair(v, phi).values;
    const auto c = pair(u + scale(v, GenNumber::constant(3)), phi).values;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(c[i] == doctest::Approx(a[i] + 3 * b[i]).epsilon(1e-10).scale(1));
}

TEST_CASE("pairing in two dimensions") {
    const Net u = Net::parse("x1*x2 + eps", 2);
    const auto phi = TestFunction::make({0.5, 0.5}, 0.5);
    const auto s = pair(u, phi);
    // symmetric bump: <x1 x2, phi> = c1 c2
    for (std::size_t i = 0; i < s.grid.size(); ++i) CHECK(s.values[i] == doctest::Approx(0.25 + s.grid.eps(i)).epsilon(1e-10));
}

TEST_CASE("integrate_abs") {
    EpsGrid g;
    const auto one = integrate_abs(Net::parse("1", 1), GenNumber::constant(0), GenNumber::constant(1));
    for (double v : one.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    const auto small = integrate_abs(Net::parse("exp(-1/eps)*sin(x)^2", 1), GenNumber::constant(0), GenNumber::constant(1));
    const double c = (1 - std::sin(2.0) / 2) / 2;
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(small.values()[i] == doctest::Approx(c * std::exp(-1 / g.eps(i))).epsilon(1e-10));
    CHECK(nonneg_consistent(GenNumber::tabulated(g, [&] {
                                std::vector<double> v;
                                for (double x : small.values()) v.push_back(-x);
                                return v;
                            }()),
                            12)
              .passed());

    // the subsequence counterexample: b = 1 and f = 0 on odd levels
    std::map<int, Expr> bo;
    Net f = Net::parse("1", 1);
    for (int k = g.k_min; k <= g.k_max; ++k)
        if (k % 2) {
            bo[k] = parse("1", 1);
            f.set_override(k, parse("0", 1));
        }
    const GenNumber b = GenNumber::closed(parse("0", 1), bo);
    try {
        integrate_abs(f, GenNumber::constant(0), b);
        FAIL("expected a precondition failure");
    } catch (const PreconditionViolated& e) {
        const std::string m = e.what();
        CHECK(m.find("raw integral max 0") != std::string::npos);
        CHECK(m.find("|f| reaches 1") != std::string::npos);
    }
}

TEST_CASE("integrate_abs is monotone") {
    const Net f = Net::parse("sin(x)*eps", 1), g = Net::parse("eps + x^2", 1);
    const auto a = integrate_abs(f, GenNumber::parse("-1"), GenNumber::parse("1 + eps"));
    const auto b = integrate_abs(g, GenNumber::parse("-1"), GenNumber::parse("1 + eps"));
    for (std::size_t i = 0; i < a.values().size(); ++i) CHECK(a.values()[i] <= b.values()[i] + 1e-12);
}

TEST_CASE("association") {
    auto rho = Mollifier::build(4);
    const std::vector<TestFunction> phis{TestFunction::make({0.0}, 1.0), TestFunction::make({0.3}, 0.5, "x")};
    const Net d = embed(DistributionSpec::delta(0), rho);
    CHECK(associate(d - embed(DistributionSpec::delta(0), rho), phis).converges_to_zero());
    CHECK(associate(Net::parse("eps", 1), phis).converges_to_zero());

    Net osc = Net::parse("0", 1);
    for (int k = 6; k <= 20; k += 2) osc.set_override(k, parse("1", 1));
    const auto v = associate(osc, phis);
    CHECK(!v.converges);

    const auto dv = associate(d, {phis[0]});
    CHECK(dv.converges);
    double zero = 0;
    CHECK(dv.per_phi[0].limit == doctest::Approx(phis[0](std::span(&zero, 1))).epsilon(1e-6));
    CHECK(tail_quarter_begin(9) == 6);
    CHECK(tail_quarter_begin(15) == 11);
}
