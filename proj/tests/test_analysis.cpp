#include <doctest.h>

#include <algorithm>
#include <random>

#include "imt/analysis/serre.hpp"
#include "imt/analysis/signed.hpp"
#include "imt/error.hpp"

using namespace imt;

namespace {

std::vector<InvariantPoint> series(std::vector<std::optional<long>> lambdas, long mu = 0) {
    std::vector<InvariantPoint> out;
    for (int n = 0; n < static_cast<int>(lambdas.size()); ++n) {
        InvariantPoint pt{n, std::nullopt, lambdas[n]};
        if (lambdas[n]) pt.mu = mu;
        out.push_back(pt);
    }
    return out;
}

std::vector<long> reduced(long p, std::vector<long> ts) {
    for (auto& t : ts) t %= p * p - 1;
    return ts;
}

}  // namespace

TEST_CASE("signed invariants from a stable series") {
    auto r = extract_signed(series({0, 2, 12, 62, 312}), 4, 5);
    CHECK(r.pattern == LambdaPattern::Stable);
    CHECK(r.lambda_sharp == 0);
    CHECK(r.lambda_flat == 2);
    CHECK(r.n0 == 0);
    CHECK(r.n_max == 4);
    CHECK(r.mu == 0);
    CHECK(r.mu_hypothesis);

    auto s = extract_signed(series({0, 3, 24, 171, 1200}), 5, 7);
    CHECK(s.lambda_sharp == 0);
    CHECK(s.lambda_flat == 3);

    // the first point is off the pattern: n0 moves past it
    auto t = extract_signed(series({0, 1, 20, 105, 520}), 6, 5);
    CHECK(t.pattern == LambdaPattern::WeightPPlusOne);
    CHECK(t.n0 == 2);
    CHECK(t.lambda_sharp == 0);
    CHECK(t.lambda_flat == 5);

    // zero element at n = 0
    auto u = extract_signed(series({std::nullopt, 0, 5, 20, 105}), 2, 5);
    CHECK(u.n0 == 1);
    CHECK(u.lambda_flat == 0);
    CHECK(u.lambda_sharp == 1);
    CHECK(u.mu == 0);
}

TEST_CASE("extraction is order independent and idempotent") {
    auto pts = series({0, 2, 12, 62, 312});
    auto a = extract_signed(pts, 4, 5);
    std::mt19937 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        auto shuffled = pts;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        shuffled.push_back(shuffled.front());
        auto b = extract_signed(shuffled, 4, 5);
        CHECK(b.points == a.points);
        CHECK(b.lambda_sharp == a.lambda_sharp);
        CHECK(b.lambda_flat == a.lambda_flat);
        CHECK(b.n0 == a.n0);
    }
    auto again = extract_signed(a.points, 4, 5);
    CHECK(again.points == a.points);
    CHECK(again.lambda_flat == a.lambda_flat);
    CHECK(again.n0 == a.n0);

    auto bad = pts;
    bad.push_back({2, 0, 13});
    CHECK_THROWS_AS(extract_signed(bad, 4, 5), SchemaMismatch);
}

TEST_CASE("too few points per parity") {
    CHECK_THROWS_AS(extract_signed(series({0, 2, 12}), 4, 5), InsufficientData);
    CHECK_THROWS_AS(extract_signed({{1, 0, 2}, {3, 0, 62}, {2, 0, 12}}, 4, 5), InsufficientData);
}

TEST_CASE("deviating series and the corestriction pattern") {
    auto g = series({0, 2, 12, 62, 312});
    auto r = extract_signed(series({0, 4, 22, 112, 562}), 16, 5);
    CHECK(r.pattern == LambdaPattern::None);
    CHECK_FALSE(r.lambda_flat);
    CHECK_FALSE(r.mu_hypothesis);

    auto c = extract_signed(series({0, 4, 22, 112, 562}), 16, 5, g);
    CHECK(c.pattern == LambdaPattern::Corestriction);
    CHECK_FALSE(c.lambda_flat);

    // off by one at n = 3: neither pattern
    auto d = extract_signed(series({0, 4, 22, 113, 562}), 16, 5, g);
    CHECK(d.pattern == LambdaPattern::None);
}

TEST_CASE("weight p+1 shift against a weight 2 companion") {
    auto g = series({0, 0, 4, 20, 104});
    auto r = extract_signed(series({0, 4, 20, 104, 520}), 6, 5, g);
    CHECK(r.pattern == LambdaPattern::WeightPPlusOne);
    CHECK(r.lambda_flat == 4);
    CHECK(r.note.find("p-1") != std::string::npos);
}

TEST_CASE("lower bound on the odd invariants") {
    auto r = extract_signed(series({0, 2, 12, 62, 312}), 4, 5);
    auto v = check_lower_bound(r, 4);
    CHECK(v.ok);
    CHECK(v.tight);
    REQUIRE(v.entries.size() == 2);
    CHECK(v.entries[0].bound == 2);
    CHECK(v.entries[1].bound == 62);

    auto w2 = check_lower_bound(extract_signed(series({0, 0, 4, 20, 104}), 2, 5), 2);
    CHECK(w2.ok);
    CHECK(w2.tight);
    CHECK(w2.entries[1].bound == 20);

    auto p7 = check_lower_bound(extract_signed(series({0, 1, 12, 85}), 3, 7), 3);
    CHECK(p7.ok);
    CHECK(p7.tight);

    // λ♭ = 5 > k - 2 = 4
    auto loose = check_lower_bound(extract_signed(series({0, 1, 20, 105, 520}), 6, 5), 6);
    CHECK(loose.ok);
    CHECK_FALSE(loose.tight);

    // a flat invariant below the bound
    auto low = check_lower_bound(extract_signed(series({0, 1, 12, 61, 312}), 4, 5), 4);
    CHECK_FALSE(low.ok);

    CHECK_FALSE(check_lower_bound(extract_signed(series({0, 4, 22, 112, 562}), 16, 5), 16).ok);
}

TEST_CASE("valuation formula values") {
    auto w2 = extract_signed(series({0, 0, 4, 20, 104}), 2, 5);
    CHECK(bk_valuation(w2, 3, 1).value == mpq_class(1, 5));
    auto f = extract_signed(series({0, 2, 12, 62, 312}), 4, 5);
    auto v = bk_valuation(f, 3, 1);
    CHECK(v.value == mpq_class(31, 50));
    CHECK(v.hypothesis_ok);  // 1 > 15/24
    CHECK(bk_valuation(f, 0, 1).value == 0);

    auto shifted = extract_signed(series({0, 2, 12, 62, 312}, 1), 4, 5);
    CHECK(bk_valuation(shifted, 3, 1).value - v.value == 1);
    CHECK(bk_valuation(shifted, 3, 2).value - v.value == mpq_class(1, 2));

    // weight 16 at 5: 1 > 75/24 fails and the flag says so
    auto big = extract_signed(series({0, 2, 12, 62, 312}), 16, 5);
    big.lambda_flat = 2;
    CHECK_FALSE(bk_valuation(big, 1, 1).hypothesis_ok);

    auto none = extract_signed(series({0, 4, 22, 112, 562}), 16, 5);
    CHECK_THROWS_AS(bk_valuation(none, 1, 1), InsufficientData);
}

TEST_CASE("pair comparison on invariants") {
    auto g = extract_signed(series({0, 2, 12, 62, 312}), 4, 5);
    auto v = compare_pair(g, g);
    CHECK(v.lambdas_equal);
    CHECK(v.lambdas.size() == 5);
    CHECK_FALSE(v.symbols_compared);

    auto f = extract_signed(series({0, 4, 22, 112, 562}), 16, 5);
    auto w = compare_pair(f, g);
    CHECK_FALSE(w.lambdas_equal);
    CHECK(w.lambdas[0].equal);
    CHECK_FALSE(w.lambdas[1].equal);
}

TEST_CASE("serre combinatorics worked sets") {
    auto a = serre_combinatorics(5, 8);
    CHECK(a.theta_types == std::vector<long>{7});
    CHECK_FALSE(inertia_equivalent(5, 7, 3));
    CHECK_FALSE(inertia_equivalent(5, 7, 15));
    CHECK_FALSE(a.s_in_theta_types);
    CHECK(a.delta == 0);
    CHECK(a.weight_bound_ok);

    auto b = serre_combinatorics(5, 16);
    CHECK(b.theta_types == std::vector<long>{7, 15});
    CHECK(b.delta == 1);
    CHECK_FALSE(b.weight_bound_ok);
    CHECK(inertia_equivalent(5, 15, 3));
    CHECK(b.s_in_theta_types);

    const std::vector<std::pair<long, std::vector<long>>> p7 = {
        {6, {}}, {12, {11}}, {18, {11, 17}}, {24, {11, 17}}, {30, {11, 17, 29}}, {36, {11, 17, 29, 35}}};
    for (const auto& [k, want] : p7) {
        CAPTURE(k);
        CHECK(serre_combinatorics(7, k).theta_types == want);
    }
    CHECK(inertia_equivalent(7, 29, 11));

    CHECK_THROWS_AS(serre_combinatorics(5, 26), OutOfRange);
    CHECK_THROWS_AS(serre_combinatorics(5, 1), OutOfRange);
    CHECK_NOTHROW(serre_combinatorics(5, 25));
}

TEST_CASE("serre combinatorics exhaustive properties") {
    for (long p : {5L, 7L, 11L}) {
        for (long k = 2; k < p * p + 1; ++k) {
            CAPTURE(p);
            CAPTURE(k);
            auto sc = serre_combinatorics(p, k);
            CHECK(sc.s >= 1);
            CHECK(sc.s <= p - 1);
            CHECK(sc.k_prime >= 0);
            CHECK(sc.k_prime <= p - 2);
            CHECK(sc.s == sc.k_prime + 1);
            CHECK(sc.delta >= 0);
            CHECK(sc.delta <= 2);
            if (k <= p + 2) CHECK(sc.theta_types.empty());
            // closed form and recursion agree as classes
            auto rec = theta_types_recursive(p, k);
            for (long t : sc.theta_types)
                CHECK(std::any_of(rec.begin(), rec.end(), [&](long r) { return inertia_equivalent(p, t, r); }));
            for (long r : rec)
                CHECK(std::any_of(sc.theta_types.begin(), sc.theta_types.end(),
                                  [&](long t) { return inertia_equivalent(p, t, r); }));
            // t ≡ 0 mod p+1 would make t ~ pt collapse; no element is of that kind
            for (long t : reduced(p, sc.theta_types)) CHECK(t % (p + 1) != 0);
            // membership of s(k) reduces to the congruence on j
            bool by_congruence = false;
            const long skip1 = (sc.k_prime + 2) / 2, skip2 = (p + sc.k_prime + 3) / 2;
            for (long j = 1; j <= (k - 2) / (p + 1) + sc.delta; ++j)
                if (k > p + 2 && j != skip1 && j != skip2 && (j % (p + 1) == 0 || (j - sc.s) % (p + 1) == 0))
                    by_congruence = true;
            CHECK(by_congruence == sc.s_in_theta_types);
        }
    }
}

TEST_CASE("applicability of the weight and slope conditions") {
    CHECK(theorem_b_applicable(7, 17, 5));
    CHECK(serre_combinatorics(7, 17).delta == 0);
    CHECK_FALSE(theorem_b_applicable(5, 16, 4));
    CHECK(theorem_b_applicable(5, 8, 4));
    CHECK_FALSE(theorem_b_applicable(5, 8, 2));
    CHECK_FALSE(theorem_b_applicable(7, 52, 4));
    CHECK(theorem_c_applicable(mpq_class(1, 2), 4));
    CHECK_FALSE(theorem_c_applicable(mpq_class(3), 4));
    CHECK_FALSE(theorem_c_applicable(std::nullopt, 4));
}
