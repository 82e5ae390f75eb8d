#include <doctest.h>

#include "imt/error.hpp"
#include "imt/mazurtate/theta.hpp"

using namespace imt;

namespace {

struct Form {
    std::shared_ptr<const ModSymSpace> space;
    std::vector<EigenSymbol> symbols;
};

// 27.4.a.b: the rational system with a_2 = 3
const EigenSymbol& level27(int sign) {
    static Form plus, minus;
    Form& f = sign > 0 ? plus : minus;
    if (!f.space) {
        f.space = std::make_shared<const ModSymSpace>(27, 4, DirichletCharacter::trivial(27));
        for (auto& s : eigen_decompose(f.space, sign))
            if (s.field().degree() == 1 && s.hecke_eigenvalue(2) == s.field().from_rational(3)) f.symbols.push_back(s);
    }
    REQUIRE(f.symbols.size() == 1);
    return f.symbols.front();
}

NormalizedSymbol normalized(const EigenSymbol& s, long p) {
    return NormalizedSymbol(s, EmbeddedNumberField::make(s.field().minpoly(), 1, PrimeContext(p, 40)));
}

}  // namespace

TEST_CASE("Mazur-Tate lambda invariants of the level 27 weight 4 form") {
    auto phi = normalized(level27(1), 5);
    const long expected[] = {0, 2, 12, 62};
    for (int n = 0; n <= 3; ++n) {
        auto th = theta_element(phi, n, 0, 0);
        CHECK(th.integral);
        CHECK(th.body.size() == (n == 0 ? 1 : (n == 1 ? 5 : (n == 2 ? 25 : 125))));
        auto inv = mu_lambda(th.body);
        REQUIRE(inv.mu.has_value());
        CHECK(*inv.mu == 0);
        CHECK(*inv.lambda == expected[n]);
        CHECK(mu_min(phi, 5) <= *inv.mu);
    }
}

TEST_CASE("sign and component checks") {
    auto phi = normalized(level27(1), 5);
    CHECK_THROWS_AS(theta_element(phi, 1, 0, 1), HypothesisViolated);
    CHECK_THROWS_AS(theta_element(phi, 1, 0, 4), OutOfRange);
    auto raw = theta_raw(phi.symbol(), 5, 1, {0});
    CHECK(raw.residues.size() == 4);
    CHECK_THROWS_AS(project_theta(raw, 1, 0, phi), OutOfRange);
}

TEST_CASE("zero group ring element has infinite invariants") {
    PrimeContext ctx(5, 20);
    GroupRingPoly zero(LocalField::rational(ctx), 2);
    auto inv = mu_lambda(zero);
    CHECK(inv.is_zero());
    CHECK(!inv.lambda.has_value());
}

TEST_CASE("gamma logarithms") {
    // (1+p)^m(a) = a / ω(a) mod p^(n+1)
    const long p = 7;
    const int n = 2;
    std::vector<long> res;
    for (long a = 1; a < 343; ++a)
        if (a % p) res.push_back(a);
    auto logs = gamma_logs(p, n, res);
    PrimeContext ctx(p, 6);
    for (size_t i = 0; i < res.size(); ++i) {
        mpz_class lhs, base = 1 + p, mod = 343;
        mpz_powm_ui(lhs.get_mpz_t(), base.get_mpz_t(), logs[i], mod.get_mpz_t());
        mpz_class rhs = lhs * teichmuller_int(res[i], ctx) % mod;
        CHECK(rhs == res[i]);
    }
}

TEST_CASE("stabilized elements are compatible under projection") {
    auto phi = normalized(level27(1), 5);
    const EigenSymbol& s = phi.symbol();
    FieldRef L = phi.local();
    LocalElem ap = phi.embed_unscaled(s.hecke_eigenvalue(5));
    LocalElem eps = LocalElem::one(L);
    auto roots = hecke_roots(ap, eps, 4);
    std::vector<ThetaElement> th;
    for (int n = 0; n <= 3; ++n) th.push_back(theta_element(phi, n, 0, 0));
    for (const LocalElem& ups : {roots.alpha, roots.beta}) {
        auto s2 = stabilize(th[2], th[1], ups, eps, 4);
        auto s3 = stabilize(th[3], th[2], ups, eps, 4);
        GroupRingPoly diff = s3.body.project_to(2) - s2.body;
        // the remaining digits reflect the precision spent on ups^-(n+2)
        for (auto& c : diff.coeffs()) CHECK(c.valuation_lower_bound() >= 20);
    }
}

TEST_CASE("three-term relation between consecutive levels") {
    // π Θ_n = a_p Θ_{n-1} - p^(k-2) ν Θ_{n-2}
    auto phi = normalized(level27(1), 5);
    FieldRef L = phi.local();
    LocalElem ap = phi.embed_unscaled(phi.symbol().hecke_eigenvalue(5));
    auto t1 = theta_element(phi, 1, 0, 0), t2 = theta_element(phi, 2, 0, 0), t3 = theta_element(phi, 3, 0, 0);
    GroupRingPoly lhs = t3.body.project_to(2);
    GroupRingPoly rhs = t2.body.scaled(ap) - t1.body.norm_to(2).scaled(LocalElem::from_int(L, 25));
    const GroupRingPoly diff = lhs - rhs;
    for (auto& c : diff.coeffs()) CHECK(c.valuation_lower_bound() >= 30);
}
