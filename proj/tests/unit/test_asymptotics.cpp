#include "doctest.h"
#include "epsnet/algebra.hpp"
#include "epsnet/asymptotics.hpp"
#include "epsnet/embedding.hpp"
#include "epsnet/error.hpp"
#include "epsnet/net.hpp"
#include "epsnet/parallel.hpp"

#include <cmath>
#include <functional>

using namespace epsnet;

namespace {

DecaySamples synthetic(const std::function<double(double)>& f, EpsGrid g = {}) {
    DecaySamples s;
    s.grid = g;
    for (std::size_t i = 0; i < g.size(); ++i) s.values.push_back(f(g.eps(i)));
    return s;
}

}  // namespace

TEST_CASE("grid and lattice basics") {
    EpsGrid g;
    CHECK(g.size() == 15);
    CHECK(g.eps(0) == std::ldexp(1.0, -6));
    CHECK(g.eps(14) == std::ldexp(1.0, -20));
    CHECK(g.tail_begin() == 7);  // last 8 points
    CHECK_THROWS_AS((EpsGrid{2.0, 6, 12}).validate(), PreconditionViolated);

    const auto K = CompactSet::interval(-1, 1);
    CHECK(K.lattice().size() == 257);
    CHECK(K.lattice().front() == -1.0);
    CHECK(K.lattice().back() == 1.0);
    // eps patch: 65 extra points inside
    CHECK(K.lattice(1.0 / 64).size() == 257 + 65);

    const auto C = CompactSet::cube(2, 0, 1);
    CHECK(C.lattice().size() == 65u * 65u * 2u);

    const auto A = CompactSet::annulus(1, 0.5, 2);
    for (double x : A.lattice(1.0 / 64)) CHECK(std::abs(x) >= 0.5);
    CHECK(A.distance_from({0.0}) == doctest::Approx(0.5));
    const auto A2 = CompactSet::annulus(2, 0.5, 2);
    const auto pts = A2.lattice();
    for (std::size_t i = 0; i < pts.size(); i += 2) {
        const double r = std::hypot(pts[i], pts[i + 1]);
        CHECK(r >= 0.5 - 1e-12);
        CHECK(r <= 2 + 1e-12);
    }
    CHECK_THROWS_AS(CompactSet::annulus(1, 2, 1), PreconditionViolated);
}

TEST_CASE("refined lattices nest") {
    const auto coarse = CompactSet::interval(-1, 1, 129);
    const auto fine = CompactSet::interval(-1, 1, 257);
    const auto c = coarse.lattice(), f = fine.lattice();
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == f[2 * i]);
}

TEST_CASE("fit_order recovers exact power laws") {
    CHECK(fit_order(synthetic([](double e) { return e * e; })).slope == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit_order(synthetic([](double e) { return 1.0 / e; })).slope == doctest::Approx(-1.0).epsilon(1e-9));
    const Fit z = fit_order(synthetic([](double) { return 0.0; }));
    CHECK(z.all_zero);
    CHECK(std::isinf(z.slope));
    // only three nonzero tail samples
    DecaySamples s = synthetic([](double) { return 0.0; });
    s.values[14] = s.values[13] = s.values[12] = 1.0;
    CHECK_THROWS_AS(fit_order(s), InsufficientData);
}

TEST_CASE("scaling by eps^a shifts the slope by a") {
    auto base = [](double e) { return 3.0 + std::sin(1.0 / e) * 0.5; };
    const double s0 = fit_order(synthetic(base)).slope;
    for (double a : {0.5, 1.0, 3.0}) {
        const double s1 = fit_order(synthetic([&](double e) { return base(e) * std::pow(e, a); })).slope;
        CHECK(s1 - s0 == doctest::Approx(a).epsilon(1e-9));
    }
}

TEST_CASE("negligibility verdicts") {
    auto v = verdict_negligible(synthetic([](double e) { return e * e; }), 2);
    CHECK(v.outcome == Outcome::Negligible);
    CHECK(verdict_negligible(synthetic([](double e) { return e * e; }), 3).outcome == Outcome::Fails);
    // monotone in m
    for (double m = 0; m <= 2; m += 0.25)
        CHECK(verdict_negligible(synthetic([](double e) { return e * e; }), m).outcome == Outcome::Negligible);
    // exp(-1/eps) lies below eps^12 on the tail: direct comparison
    EpsGrid g;
    for (std::size_t i = g.tail_begin(); i < g.size(); ++i) CHECK(std::exp(-1 / g.eps(i)) < std::pow(g.eps(i), 12));
    CHECK(verdict_negligible(synthetic([](double e) { return std::exp(-1 / e); }), 12).outcome == Outcome::Negligible);
    CHECK(verdict_negligible(synthetic([](double) { return 1e-14; }), 12).outcome == Outcome::Negligible);
    const auto inf = verdict_negligible(synthetic([](double) { return INFINITY; }), 1);
    CHECK(inf.outcome == Outcome::Fails);
    CHECK_THROWS_AS(verdict_negligible(synthetic([](double e) { return e; }), 13), PreconditionViolated);
}

TEST_CASE("moderateness verdicts") {
    auto m = verdict_moderate(synthetic([](double e) { return 1 / (e * e * e); }), 40);
    CHECK(m.outcome == Outcome::Moderate);
    CHECK(m.order == 3);
    CHECK(verdict_moderate(synthetic([](double e) { return std::pow(e, -2.9); }), 40).order == 3);
    CHECK(verdict_moderate(synthetic([](double e) { return std::pow(e, -0.2); }), 40).order == 0);
    CHECK(verdict_moderate(synthetic([](double) { return 7.0; }), 40).order == 0);
    CHECK(verdict_moderate(synthetic([](double e) { return std::exp(1 / e); }), 40).outcome == Outcome::Fails);
    CHECK(verdict_moderate(synthetic([](double e) { return 1 / e; }), 0.5).outcome == Outcome::Fails);
}

TEST_CASE("worst ranks outcomes") {
    DecayVerdict z = exact_zero(), n, m1, m3, f;
    n.outcome = Outcome::Negligible;
    m1.outcome = m3.outcome = Outcome::Moderate;
    m1.order = 1;
    m3.order = 3;
    f.outcome = Outcome::Fails;
    f.where = "first";
    DecayVerdict f2 = f;
    f2.where = "second";
    CHECK(worst({z, n}).outcome == Outcome::Negligible);
    CHECK(worst({m3, m1, n}).order == 3);
    CHECK(worst({m1, m3}).order == 3);
    CHECK(worst({n, f, f2, m1}).where == "first");
    CHECK(worst({}).outcome == Outcome::ExactZero);
}

TEST_CASE("sample_sup examples") {
    EpsGrid g;
    const auto K = CompactSet::interval(-1, 1);
    const auto s = sample_sup(Net::parse("x^2 + eps", 1), K, {0}, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(s.values[i] == 1.0 + g.eps(i));

    const auto b = sample_sup(Net::parse("eps^(-1)*bump((x - eps)/eps)", 1), CompactSet::interval(-2, 2), {0}, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(b.values[i] == doctest::Approx(std::exp(-1.0) / g.eps(i)).epsilon(1e-14));
    const auto vm = verdict_moderate(b, 40);
    CHECK(vm.outcome == Outcome::Moderate);
    CHECK(vm.order == 1);
    CHECK(vm.slope == doctest::Approx(-1).epsilon(1e-9));

    const auto z = sample_sup(Net::zero(1), K, {0}, g);
    for (double v : z.values) CHECK(v == 0.0);

    // eps sin(x) against m = 2
    const auto es = verdict_negligible(sample_sup(Net::parse("eps*sin(x)", 1), K, {0}, g), 2);
    CHECK(es.outcome == Outcome::Fails);
    CHECK(es.slope == doctest::Approx(1).epsilon(1e-9));

    CHECK(verdict_moderate(sample_sup(Net::parse("x^2", 1), K, {0}, g), 40).order == 0);
}

TEST_CASE("sample_sup errors carry a location") {
    EpsGrid g;
    try {
        sample_sup(Net::parse("log(x)", 1), CompactSet::interval(-1, 1), {0}, g);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("x=(") != std::string::npos);
    }
    Net pierced = Net::parse("abs(x)^(-1)", 1, Domain::pierced());
    CHECK_THROWS_AS(sample_sup(pierced, CompactSet::interval(-1, 1), {0}, g), PiercedViolation);
    CHECK_NOTHROW(sample_sup(pierced, CompactSet::annulus(1, 0.5, 2), {0}, g));
    CHECK_THROWS_AS(sample_sup(Net::parse("x", 1), CompactSet::interval(-1, 1), {9}, g), PreconditionViolated);
}

TEST_CASE("mollified Heaviside dilation has an eps-free sup") {
    auto rho = Mollifier::build(4);
    const Net H = embed(DistributionSpec::heaviside(), rho);
    const Net H2 = compose_unchecked(H, Map::scale(2));
    EpsGrid g;
    const auto s = sample_sup(H2 - H, CompactSet::interval(-1, 1), {0}, g);
    CHECK(fit_order(s).slope == doctest::Approx(0).epsilon(0.1));
    // oracle: the sup of R(2t) - R(t) over t by direct maximization, which the
    // lattice sup approaches from below
    double best = 0;
    for (int i = -40000; i <= 40000; ++i) {
        const double t = i * 1e-4;
        best = std::max(best, std::abs(rho->primitive(2 * t) - rho->primitive(t)));
    }
    for (std::size_t i = 0; i < g.size(); i += 7) CHECK(s.values[i] <= best + 1e-12);
    CHECK(s.values.back() > 0.9 * best);
}

TEST_CASE("sample_sup does not depend on the worker count") {
    const Net u = Net::parse("sin(x/eps)*eps + x^3", 1);
    set_jobs(1);
    const auto a = sample_sup(u, CompactSet::interval(-1, 2), {1}, {});
    set_jobs(4);
    const auto b = sample_sup(u, CompactSet::interval(-1, 2), {1}, {});
    set_jobs(1);
    CHECK(a.values == b.values);
}
