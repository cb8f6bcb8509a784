#include "doctest.h"
#include "epsnet/algebra.hpp"
#include "epsnet/embedding.hpp"
#include "epsnet/error.hpp"
#include "epsnet/homogeneity.hpp"

#include <cmath>

using namespace epsnet;

namespace {

HomogeneityQuery query(double alpha, std::vector<CompactSet> Ks = {}) {
    HomogeneityQuery q;
    q.alpha = alpha;
    q.Ks = std::move(Ks);
    return q;
}

const CompactSet unit = CompactSet::interval(-1, 1);
const CompactSet ring12 = CompactSet::annulus(1, 1, 2);

Net pierced(const char* text, int dim = 1) { return Net::parse(text, dim, Domain::pierced()); }

}  // namespace

TEST_CASE("degree gate") {
    CHECK(degree_gate(3));
    CHECK(degree_gate(0));
    CHECK(degree_gate(2 + 1e-12));
    CHECK(!degree_gate(-1));
    CHECK(!degree_gate(0.5));
    CHECK(!degree_gate(NAN));
}

TEST_CASE("scaling invariance") {
    CHECK(scaling_invariance(Net::parse("1", 1), query(0)).overall.outcome == Outcome::ExactZero);

    auto rho = Mollifier::build(4);
    const auto H = scaling_invariance(embed(DistributionSpec::heaviside(), rho), query(0, {unit}));
    CHECK(H.overall.outcome == Outcome::Fails);
    for (const auto& c : H.cells)
        if (c.label.find("lambda=2 ") == 0) CHECK(std::abs(c.verdict.slope) < 0.15);

    const auto s = scaling_invariance(Net::parse("2 + exp(-1/eps)*sin(x)", 1), query(0));
    CHECK(s.overall.outcome == Outcome::Negligible);
    CHECK(s.overall.order == 8);
    REQUIRE(s.constancy);
    CHECK(s.constancy->passed());
    CHECK(s.passed());

    HomogeneityQuery bad = query(0);
    bad.lambdas = {1.0, 2.0};
    CHECK_THROWS_AS(scaling_invariance(Net::parse("1", 1), bad), PreconditionViolated);
}

TEST_CASE("translation invariance") {
    const std::vector<std::vector<double>> h{{1.0}, {-0.5}};
    CHECK(translation_invariance(Net::parse("1 + eps", 1), h, {unit}, 8).overall.outcome == Outcome::ExactZero);
    CHECK(translation_invariance(Net::parse("x^2", 1), {{1.0}}, {unit}, 8).overall.outcome == Outcome::Fails);
    const auto c = translation_invariance(Net::parse("3 + eps^20*cos(x)", 1), h, {unit}, 8);
    CHECK(c.overall.outcome == Outcome::Negligible);
    CHECK(c.passed());
    // a periodic net passes a finite shift set; the constancy check catches it
    const auto p = translation_invariance(Net::parse("sin(2*3.141592653589793*x)", 1), {{1.0}}, {unit}, 8);
    CHECK(p.overall.passed());
    REQUIRE(p.constancy);
    CHECK(!p.passed());
}

TEST_CASE("strong homogeneity") {
    CHECK(strong_homogeneity(Net::parse("3*x^2", 1), query(2)).overall.outcome == Outcome::ExactZero);
    CHECK(strong_homogeneity(Net::parse("(1 + eps)*x^3", 1), query(3)).overall.outcome == Outcome::ExactZero);
    CHECK(strong_homogeneity(Net::parse("(1 + eps)*x^3", 1), query(2)).overall.outcome == Outcome::Fails);

    auto rho = Mollifier::build(4);
    const Net xp = embed(DistributionSpec::xplus(1), rho);
    CHECK(strong_homogeneity(xp, query(1, {unit})).overall.outcome == Outcome::Fails);
    const auto ann = strong_homogeneity(xp, query(1, {ring12}));
    CHECK(ann.overall.outcome == Outcome::Negligible);
    CHECK(ann.overall.order == 8);

    // degree gate on the whole space
    const auto d = strong_homogeneity(embed(DistributionSpec::delta(0), rho), query(-1));
    CHECK(d.overall.outcome == Outcome::Fails);
    CHECK(d.note.find("degree gate") != std::string::npos);
    CHECK(strong_homogeneity(Net::zero(1), query(-1)).passed());

    // pierced monomials of any degree
    CHECK(strong_homogeneity(pierced("abs(x)^(-1)"), query(-1)).overall.outcome == Outcome::ExactZero);
    CHECK(strong_homogeneity(pierced("abs(x)^(1/2)"), query(0.5)).passed());
    CHECK(strong_homogeneity(pierced("x*abs(x)^(-1)"), query(0)).overall.outcome == Outcome::ExactZero);
    CHECK(strong_homogeneity(Net::parse("x1*x2 + x1^2", 2), query(2)).overall.outcome == Outcome::ExactZero);

    // level-dependent constant: a generalized constant is homogeneous of degree 0
    Net osc = Net::parse("0", 1);
    for (int k = 6; k <= 20; k += 2) osc.set_override(k, parse("1", 1));
    CHECK(strong_homogeneity(osc, query(0)).passed());
}

TEST_CASE("weak homogeneity") {
    auto rho = Mollifier::build(4);
    const auto d = weak_homogeneity(embed(DistributionSpec::delta(0), rho), query(-1));
    CHECK(d.overall.outcome == Outcome::Negligible);
    CHECK(d.overall.order == 8);

    const auto q = weak_homogeneity(Net::parse("x^2 + eps", 1), query(2));
    CHECK(q.overall.outcome == Outcome::Fails);
    // r_k = eps (1 - lambda^2) <1, phi>; <1, phi> = 1 + c for the modulated one
    CHECK(q.overall.slope == doctest::Approx(1.0).epsilon(0.1));
    for (const auto& c : q.cells) {
        const double lambda = std::stod(c.label.substr(7));
        const double mass = c.label.find("q=") != std::string::npos ? -0.25 : 1.0;
        for (std::size_t i = 0; i < c.residuals.size(); ++i) {
            const double eps = EpsGrid{}.eps(i);
            CHECK(c.residuals[i] == doctest::Approx(eps * (1 - lambda * lambda) * mass).epsilon(1e-8));
        }
    }

    CHECK(weak_homogeneity(embed(DistributionSpec::heaviside(), rho), query(0)).passed());
    for (int n : {1, 2}) CHECK(weak_homogeneity(embed(DistributionSpec::xplus(n), rho), query(n)).passed());
    CHECK(weak_homogeneity(embed(DistributionSpec::delta(1), rho), query(-2)).passed());

    HomogeneityQuery near = query(0);
    near.phis = {TestFunction::make({0.0}, 1.0)};
    CHECK_THROWS_AS(weak_homogeneity(Net::parse("1", 1), near), PreconditionViolated);
}

TEST_CASE("associative homogeneity") {
    const Net u = Net::parse("x^2 + eps", 1);
    CHECK(associative_homogeneity(u, query(2)).converges_to_zero());
    const auto f = associative_homogeneity(u, query(1));
    CHECK(!f.converges_to_zero());
    // the centred bump: r -> (lambda^2 - lambda) int x^2 phi
    for (const auto& p : f.per_phi)
        if (!p.phi.away) CHECK(std::abs(p.limit) > 1e-3);

    auto rho = Mollifier::build(4);
    CHECK(associative_homogeneity(embed(DistributionSpec::delta(0), rho), query(-1)).converges_to_zero());
    CHECK(associative_homogeneity(embed(DistributionSpec::heaviside(), rho), query(0)).converges_to_zero());
}

TEST_CASE("Euler residuals") {
    CHECK(euler_strong(Net::parse("5*x^3", 1), 3, {unit}, 8).outcome == Outcome::ExactZero);
    CHECK(euler_strong(Net::parse("x1^2*x2", 2), 3, {}, 8).outcome == Outcome::ExactZero);

    auto rho = Mollifier::build(4);
    const Net H = embed(DistributionSpec::heaviside(), rho);
    const auto s = euler_strong(H, 0, {unit}, 8);
    CHECK(s.outcome == Outcome::Fails);
    CHECK(std::abs(s.slope) < 0.15);
    const std::vector<TestFunction> phis{TestFunction::make({0.0}, 1.0), TestFunction::make({0.2}, 0.5, "1 + x")};
    CHECK(euler_associated(H, 0, phis).converges_to_zero());

    const Net q = Net::parse("x^2 + eps", 1);
    const auto qs = euler_strong(q, 2, {unit}, 8);
    CHECK(qs.outcome == Outcome::Fails);
    CHECK(qs.slope == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(euler_associated(q, 2, phis).converges_to_zero());
    CHECK_THROWS_AS(euler_associated(q, 2, {}), PreconditionViolated);
}

TEST_CASE("radial factorization") {
    const CompactSet A = CompactSet::annulus(1, 0.5, 2);
    CHECK(radial_factorization_check(pierced("abs(x)^(-1)"), -1, {A}, 8).outcome == Outcome::ExactZero);
    CHECK(radial_factorization_check(pierced("x*abs(x)^(-1)"), 0, {A}, 8).outcome == Outcome::ExactZero);
    CHECK(radial_factorization_check(pierced("abs(x)^(1/2)"), 0.5, {A}, 8).passed());
    CHECK(radial_factorization_check(pierced("abs(x)^2"), 2, {A}, 8).passed());
    // residual eps |x|^(1/2) (sin|x| - sin 1): slope 1 < 2
    const auto v = radial_factorization_check(pierced("abs(x)^(1/2)*(1 + eps*sin(abs(x)))"), 0.5, {A}, 2);
    CHECK(v.outcome == Outcome::Fails);
    CHECK(v.slope == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(radial_factorization_check(Net::parse("x^2", 1), 2, {A}, 8), PreconditionViolated);
}

TEST_CASE("cutoff profile") {
    CHECK(cutoff_sigma(0) == 1.0);
    CHECK(cutoff_sigma(1) == 1.0);
    CHECK(cutoff_sigma(-0.7) == 1.0);
    CHECK(cutoff_sigma(2) == 0.0);
    CHECK(cutoff_sigma(7) == 0.0);
    for (double y = 0; y < 2.5; y += 0.01) {
        CHECK(cutoff_sigma(y) >= 0.0);
        CHECK(cutoff_sigma(y) <= 1.0);
        CHECK(cutoff_sigma(y + 0.01) <= cutoff_sigma(y));
    }
    const Expr s = sigma_expr(1, Expr::constant(1.0));
    for (double y : {0.3, 1.2, 1.5, 1.9}) CHECK(evaluate(s, Binding{std::span(&y, 1), 1.0}) == doctest::Approx(cutoff_sigma(y)));
}

TEST_CASE("homogeneous extension") {
    const Net inv = pierced("abs(x)^(-1)");
    const auto e = homogeneous_extension(inv, -1);
    CHECK(e.extension.domain().is_whole());
    CHECK(e.input_order == 0);
    CHECK(e.moderate.outcome == Outcome::Moderate);
    CHECK(e.moderate.order == 1);
    CHECK(e.within_bound);
    // the singularity is cut away: 0 at the origin
    double zero = 0.0;
    CHECK(e.extension.eval(10, 1.0 / 1024, std::span(&zero, 1)) == 0.0);
    // oracle: sup_{eps <= |x|} (1 - sigma(|x|/eps)) / |x| by dense search
    {
        const double eps = 1.0 / 1024;
        double best = 0;
        for (double y = 1.0; y <= 2.0; y += 1e-5) best = std::max(best, (1 - cutoff_sigma(y)) / (y * eps));
        CHECK(e.samples.values[4] <= best * (1 + 1e-12));
        CHECK(e.samples.values[4] >= 0.9 * best);
    }
    const auto r = extension_restriction(e, inv, CompactSet::annulus(1, 0.5, 2), 8);
    CHECK(r.structural);
    CHECK(r.verdict.outcome == Outcome::ExactZero);
    CHECK(r.passed());

    const Net x2 = pierced("x^2");
    const auto e2 = homogeneous_extension(x2, 2);
    const auto r2 = extension_restriction(e2, x2, ring12, 8);
    CHECK(r2.verdict.outcome == Outcome::ExactZero);
    CHECK(r2.numeric_sup == 0.0);
    // degree mismatch: strong homogeneity of the extension at another degree fails
    CHECK(strong_homogeneity(e2.extension, query(3)).overall.outcome == Outcome::Fails);
    CHECK(strong_homogeneity(e2.extension, query(2, {ring12})).passed());

    const auto h = homogeneous_extension(pierced("abs(x)^(1/2)"), 0.5);
    CHECK(h.moderate.outcome == Outcome::Moderate);
    CHECK(h.within_bound);
    CHECK_THROWS_AS(homogeneous_extension(Net::parse("x", 1), 1), PreconditionViolated);
    CHECK_THROWS_AS(homogeneous_extension(inv, INFINITY), PreconditionViolated);
}

TEST_CASE("tempered representatives") {
    const Net x2 = Net::parse("x^2", 1);
    const Net v = tempered_representative(x2, 2);
    for (double x : {2.0, 2.5, -3.0, 7.0}) CHECK(v.eval(8, 1.0 / 256, std::span(&x, 1)) == doctest::Approx(x * x).epsilon(1e-15));
    for (double x : {0.0, 0.5, 1.5}) CHECK(v.eval(8, 1.0 / 256, std::span(&x, 1)) == doctest::Approx(x * x).epsilon(1e-14).scale(1e-300));
    CHECK(tempered_check(v, 2).passed);
    CHECK(tempered_check(x2, 2).passed);

    const Net inv = tempered_representative(pierced("abs(x)^(-1)"), -1);
    const auto t = tempered_check(inv, 1);
    CHECK(t.passed);

    const auto ex = tempered_check(Net::parse("exp(x)", 1), 5);
    CHECK(!ex.passed);
    CHECK(ex.note.find("R=100") != std::string::npos);
    CHECK(!tempered_check(Net::parse("x^3", 1), 2).passed);
    CHECK(tempered_check(Net::parse("x^3", 1), 3).passed);
}

TEST_CASE("polynomial coefficients") {
    EpsGrid g;
    const auto a = polynomial_coefficients(Net::parse("(2 + eps)*x^3", 1), 3);
    REQUIRE(a.coefficients.size() == 1);
    const auto av = a.coefficients[0].on(g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(av[i] == doctest::Approx(2 + g.eps(i)).epsilon(1e-15));
    CHECK(a.residual.outcome == Outcome::ExactZero);

    const auto lat = coefficient_lattice(2, 2);
    const std::vector<std::vector<double>> want{{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}};
    CHECK(lat == want);

    const auto b = polynomial_coefficients(Net::parse("x1*x2 + x1^2", 2), 2);
    REQUIRE(b.coefficients.size() == 3);
    CHECK(b.monomials[0] == std::vector<int>{2, 0});
    CHECK(b.monomials[1] == std::vector<int>{1, 1});
    CHECK(b.monomials[2] == std::vector<int>{0, 2});
    const double expect[] = {1, 1, 0};
    for (int j = 0; j < 3; ++j)
        for (double v : b.coefficients[j].on(g)) CHECK(std::abs(v - expect[j]) < 1e-10);
    CHECK(b.residual.passed());
    CHECK(b.condition < 1e8);

    const auto c = polynomial_coefficients(Net::parse("x^2 + eps", 1), 2);
    const auto cv = c.coefficients[0].on(g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(cv[i] == doctest::Approx(1 + g.eps(i)));
    CHECK(c.residual.outcome == Outcome::Fails);
    CHECK(c.residual.slope == doctest::Approx(1.0).epsilon(1e-6));

    // a kernel net gives tabulated coefficients
    auto rho = Mollifier::build(4);
    const auto k = polynomial_coefficients(embed(DistributionSpec::xplus(2), rho), 2, 8, {CompactSet::interval(1, 2)});
    CHECK(k.coefficients[0].is_tabulated());
    CHECK(k.residual.passed());
    CHECK_THROWS_AS(polynomial_coefficients(Net::parse("x", 1), 7), PreconditionViolated);
}

TEST_CASE("consistency ladder on a small suite") {
    auto rho = Mollifier::build(4);
    struct Case {
        Net u;
        double alpha;
    };
    const std::vector<Case> suite{{Net::parse("3*x^2", 1), 2},
                                  {Net::parse("x^2 + eps", 1), 2},
                                  {embed(DistributionSpec::heaviside(), rho), 0},
                                  {embed(DistributionSpec::delta(0), rho), -1},
                                  {pierced("abs(x)^(-1)"), -1}};
    for (const auto& c : suite) {
        const HomogeneityQuery q = query(c.alpha);
        const bool strong = strong_homogeneity(c.u, q).passed();
        const bool weak = weak_homogeneity(c.u, q).passed();
        const bool assoc = associative_homogeneity(c.u, q).converges_to_zero(q.assoc_tol);
        if (strong) CHECK(weak);
        if (weak) CHECK(assoc);
        const bool sx = strong_homogeneity(c.u, q).overall.outcome == Outcome::ExactZero;
        const bool ex = euler_strong(c.u, c.alpha, {}, 8).outcome == Outcome::ExactZero;
        CHECK(sx == ex);
    }
}
