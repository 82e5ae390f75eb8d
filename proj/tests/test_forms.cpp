#include <doctest.h>

#include "imt/analysis/forms.hpp"
#include "imt/error.hpp"

using namespace imt;

namespace {

FormSpec spec(std::string label, long N, int k, std::string chi, int degree, std::map<long, long> traces = {}) {
    FormSpec s;
    s.label = std::move(label);
    s.level = N;
    s.weight = k;
    s.character = std::move(chi);
    s.degree = degree;
    s.traces = std::move(traces);
    return s;
}

}  // namespace

TEST_CASE("selecting a system by degree and traces") {
    auto f = ResolvedForm::resolve(spec("27.4.a.b", 27, 4, "trivial", 1, {{2, 3}}));
    CHECK(f.symbol().hecke_eigenvalue(2) == f.symbol().field().from_rational(3));
    CHECK_THROWS_AS(ResolvedForm::resolve(spec("ambiguous", 27, 4, "trivial", 1)), SchemaMismatch);
    CHECK_THROWS_AS(ResolvedForm::resolve(spec("absent", 27, 4, "trivial", 3)), NotFound);
    auto cands = ResolvedForm::candidates(27, 4, "trivial", {2, 5});
    CHECK(cands.size() == 3);
    CHECK(cands.back().degree == 2);
    CHECK(cands.back().traces.at(5) == 0);
}

TEST_CASE("slopes at the primes above p") {
    auto f = ResolvedForm::resolve(spec("4.17.b.b", 4, 17, "kronecker:-4", 6));
    auto slopes = prime_slopes(f, 7, 40);
    REQUIRE(slopes.size() == 4);
    const int half = prime_index_for_slope(f, 7, mpq_class(1, 2), 40);
    CHECK(slopes[half - 1] == mpq_class(1, 2));
    CHECK_THROWS_AS(prime_index_for_slope(f, 7, mpq_class(5), 40), NotFound);
    CHECK_THROWS_AS(prime_index_for_slope(f, 7, mpq_class(1), 40), SchemaMismatch);
    CHECK(parse_slope("inf") == std::nullopt);
    CHECK(parse_slope("2/4") == mpq_class(1, 2));
    CHECK(slope_string(mpq_class(3, 4)) == "3/4");
}

TEST_CASE("report and valuation cross-check for the level 27 weight 4 form") {
    auto f = ResolvedForm::resolve(spec("27.4.a.b", 27, 4, "trivial", 1, {{2, 3}}));
    // the resultant at n = 3 has valuation 62, so the working precision must exceed it
    FormAtPrime at(f, 5, 1, 120);
    CHECK(at.slope() == 1);
    auto report = extract_signed(at.invariants(3), 4, 5);
    CHECK(report.lambda_sharp == 0);
    CHECK(report.lambda_flat == 2);
    for (int n = 0; n <= 3; ++n) {
        auto th = at.theta(n);
        auto bk = bk_valuation(report, n, at.ramification(), &th.body);
        CAPTURE(n);
        CHECK(bk.hypothesis_ok);
        CHECK(bk.agrees);
    }
    CHECK(bk_valuation(report, 3, 1).value == mpq_class(31, 50));
}

TEST_CASE("corestriction congruence for a deviating weight 16 form") {
    auto g = FormAtPrime(ResolvedForm::resolve(spec("9.4.a.a", 9, 4, "trivial", 1)), 5, 1, 40);
    auto f = FormAtPrime(ResolvedForm::resolve(spec("9.16.a.b", 9, 16, "trivial", 1, {{2, 0}})), 5, 1, 40);
    CHECK(f.slope() == std::nullopt);
    auto fr = extract_signed(f.invariants(3), 16, 5);
    auto gpts = g.invariants(3);
    CHECK(fr.pattern == LambdaPattern::None);
    auto with_g = extract_signed(f.invariants(3), 16, 5, gpts);
    CHECK(with_g.pattern == LambdaPattern::Corestriction);
    for (int n = 1; n <= 2; ++n) {
        auto c = corestriction_congruence(f.theta(n).body, g.theta(n - 1).body);
        CAPTURE(n);
        CHECK(c.congruent);
        CHECK(c.mu_f == 2);
    }
    // the plain congruence with Θ_n(g) fails: the levels do not even match
    CHECK_THROWS_AS(corestriction_congruence(f.theta(2).body, g.theta(2).body), OutOfRange);

    // a non-congruent companion is rejected
    auto other = FormAtPrime(ResolvedForm::resolve(spec("7.3.b.a", 7, 3, "kronecker:-7", 1)), 5, 1, 40);
    CHECK_FALSE(corestriction_congruence(f.theta(2).body, other.theta(1).body).congruent);
}

TEST_CASE("mod p symbols of a congruent pair agree up to a scalar") {
    auto g = FormAtPrime(ResolvedForm::resolve(spec("9.4.a.a", 9, 4, "trivial", 1)), 5, 1, 40);
    auto f = FormAtPrime(ResolvedForm::resolve(spec("9.8.a.b", 9, 8, "trivial", 2)), 5, 1, 40);
    auto fs = phi_k_reduce(f.phi(), mu_min(f.phi(), 5));
    auto gs = phi_k_reduce(g.phi());
    auto fr = extract_signed(f.invariants(3), 8, 5);
    auto gr = extract_signed(g.invariants(3), 4, 5);
    auto v = compare_pair(fr, gr, &fs, &gs);
    CHECK(v.lambdas_equal);
    CHECK(v.symbols_compared);
    CHECK(v.symbol_scalar.has_value());

    auto other = FormAtPrime(ResolvedForm::resolve(spec("9.8.a.a", 9, 8, "trivial", 1)), 5, 1, 40);
    auto os = phi_k_reduce(other.phi(), mu_min(other.phi(), 5));
    auto w = compare_pair(fr, gr, &os, &gs);
    CHECK_FALSE(w.symbol_scalar.has_value());
}
