#include "doctest.h"
#include "epsnet/error.hpp"
#include "epsnet/zerodiv.hpp"

#include <cmath>

using namespace epsnet;

namespace {

const CompactSet K = CompactSet::interval(-1, 1);

// 0 on x <= 0, positive on (0, 2)
Net one_sided() { return Net::parse("bump(x - 1)", 1); }

Net even_zero() {
    Net f = Net::parse("1", 1);
    for (int k = 6; k <= 20; k += 2) f.set_override(k, parse("0", 1));
    return f;
}

}  // namespace

TEST_CASE("windows of a one-sided net") {
    const auto w = find_small_windows(one_sided(), K, 1.0, 12);
    CHECK(w.found);
    CHECK(w.levels.size() == EpsGrid{}.size());
    for (std::size_t i = 0; i < w.levels.size(); ++i) {
        CHECK(w.orders[i] == 12);
        CHECK(std::abs(w.centers[i] + 0.5) < 0.01);
        // window inside K and inside the zero set: construction oracle
        CHECK(w.centers[i] - w.half_widths[i] >= -1.0);
        CHECK(w.centers[i] + w.half_widths[i] <= 0.0);
    }
}

TEST_CASE("monomials give no evidence") {
    for (int k : {1, 2, 3})
        for (double rho : {0.5, 1.0, 2.0}) {
            const Net f = Net::parse(("x^" + std::to_string(k)).c_str(), 1);
            const auto w = find_small_windows(f, K, rho, 12);
            CHECK(!w.found);
            // best achievable order at a centred window is below k (rho + 1)
            for (int o : w.level_orders) CHECK(o < k * (rho + 1));
            CHECK(!zero_divisor_verdict(f, K, rho, 12).is_zero_divisor);
        }
    CHECK(zero_divisor_verdict(Net::parse("x^2", 1), K, std::nullopt, 12).str() == "NoEvidence(budget=12)");
}

TEST_CASE("even-index override net") {
    const auto w = find_small_windows(even_zero(), K, 1.0, 12);
    CHECK(w.found);
    for (int k : w.levels) CHECK(k % 2 == 0);
    CHECK(w.levels.size() == 8);
    const Net g = build_witness(w);
    const Net fg = even_zero() * g;
    for (int k : w.levels) CHECK(simplify_zero(fg.at_level(k)));
}

TEST_CASE("zero-divisor verdicts") {
    for (const Net& f : {one_sided(), even_zero()}) {
        const auto v = zero_divisor_verdict(f, K, std::nullopt, 12);
        REQUIRE(v.is_zero_divisor);
        REQUIRE(v.witness);
        CHECK(v.rhos_tried.size() == 1);
        // independent re-verification of the witness
        const auto Ks = window_sets(v.report);
        CHECK(Ks.size() == 1);
        CHECK(equals(f * *v.witness, Net::zero(1), Ks, 12).passed());
        CHECK(!equals(*v.witness, Net::zero(1), Ks, 12).passed());
        // unit sup on the subsequence, 0 elsewhere
        const auto s = sample_sup(*v.witness, Ks[0], {0}, EpsGrid{});
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const int k = EpsGrid{}.level(i);
            const bool in = std::find(v.report.levels.begin(), v.report.levels.end(), k) != v.report.levels.end();
            CHECK(s.values[i] == doctest::Approx(in ? 1.0 : 0.0).epsilon(1e-3));
        }
        // moderate: derivatives grow like eps^(-rho)
        CHECK(verdict_moderate(sample_sup(*v.witness, Ks[0], {1}, EpsGrid{}), 40).passed());
    }
}

TEST_CASE("windows persist when the budget shrinks") {
    for (const Net& f : {one_sided(), even_zero(), Net::parse("exp(-1/eps)*x^2", 1)})
        for (int b = 12; b >= 1; --b) {
            const bool hi = find_small_windows(f, K, 1.0, b).found;
            for (int c = 1; c < b; ++c)
                if (hi) CHECK(find_small_windows(f, K, 1.0, c).found);
        }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(build_witness(WindowReport{}), PreconditionViolated);
    CHECK_THROWS_AS(find_small_windows(Net::parse("x1", 2), CompactSet::cube(2, -1, 1), 1, 12), PreconditionViolated);
    CHECK_THROWS_AS(find_small_windows(one_sided(), K, 5, 12), PreconditionViolated);
    CHECK_THROWS_AS(find_small_windows(one_sided(), K, 1, 13), PreconditionViolated);
}
