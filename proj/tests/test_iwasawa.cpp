#include <random>

#include "doctest.h"
#include "imt/error.hpp"
#include "imt/iwasawa/group_ring.hpp"

using namespace imt;

namespace {

struct Rng {
    std::mt19937_64 gen{2024};
    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }
};

// random polynomial with prescribed (mu, lambda) in ord_varpi units
LPoly random_poly(const FieldRef& L, long deg, long mu, long lambda, Rng& rng) {
    LocalElem pi = LocalElem::uniformizer(L);
    LPoly f;
    for (long i = 0; i <= deg; ++i) {
        std::vector<mpz_class> c(L->degree());
        for (auto& v : c) v = rng.uniform(-60, 60);
        if (i == lambda) c[0] = rng.uniform(1, L->ctx().p - 1) + L->ctx().p * rng.uniform(0, 5), std::fill(c.begin() + 1, c.end(), 0);
        LocalElem x = LocalElem::from_coeffs(L, c);
        if (x.exact_zero() || x.is_zero()) x = LocalElem::one(L);
        long v = x.valuation_lower_bound();
        // coefficients before lambda get valuation > mu, the rest >= mu
        long target = i < lambda ? mu + 1 : mu;
        if (i == lambda) target = mu;
        x = x * pi.pow(std::max(0L, target - v + (i == lambda ? 0 : rng.uniform(0, 1))));
        if (i == lambda) x = LocalElem::from_int(L, rng.uniform(1, L->ctx().p - 1)) * pi.pow(mu);
        f.push_back(x);
    }
    return f;
}

}  // namespace

TEST_CASE("mu and lambda from the definition") {
    PrimeContext ctx(5, 30);
    auto Q = LocalField::rational(ctx);
    LPoly f(4, LocalElem::zero(Q));
    f[3] = LocalElem::one(Q);
    f[1] = LocalElem::from_int(Q, 5);
    auto inv = mu_lambda(f);
    CHECK(*inv.mu == 0);
    CHECK(*inv.lambda == 3);
    auto z = mu_lambda(LPoly(5, LocalElem::zero(Q)));
    CHECK(z.is_zero());
    CHECK(!z.lambda.has_value());
    // shared denominator shifts mu only
    CHECK(*mu_lambda(f, 2).mu == -2);
}

TEST_CASE("cyclotomic identities") {
    for (long p : {3L, 5L, 7L}) {
        for (int n = 0; n <= 3; ++n) {
            zp::Poly prod = phi_poly(p, 0);
            for (int m = 1; m <= n; ++m) prod = zp::mul(prod, phi_poly(p, m), mpz_class(0));
            CHECK(prod == omega_poly(p, n));
            long pn = 1;
            for (int i = 0; i < n; ++i) pn *= p;
            CHECK(zp::degree(omega_poly(p, n)) == pn);
            if (n >= 1) CHECK(zp::degree(phi_poly(p, n)) == pn - pn / p);
        }
    }
    zp::Poly phi1 = phi_poly(5, 1);
    CHECK(phi1 == zp::Poly{5, 10, 10, 5, 1});
}

TEST_CASE("q_n values") {
    long q5[] = {0, 0, 4, 20, 104};
    long q7[] = {0, 0, 6, 42, 300};
    for (int n = 0; n <= 4; ++n) {
        CHECK(q_n(5, n) == q5[n]);
        CHECK(q_n(7, n) == q7[n]);
    }
}

TEST_CASE("phi products") {
    PrimeContext ctx(5, 20);
    auto Q = LocalField::rational(ctx);
    auto one = phi_products(ctx, 1, 1);
    CHECK(one.plus == zp::Poly{1});
    CHECK(zp::reduce(one.minus, ctx.modulus()) == zp::reduce(phi_poly(5, 1), ctx.modulus()));
    for (int k : {2, 3, 4, 5}) {
        for (int n = 1; n <= 3; ++n) {
            auto pr = phi_products(ctx, n, k - 1);
            long pn = n == 1 ? 5 : n == 2 ? 25 : 125;
            CHECK(zp::degree(pr.all) == (k - 1) * (pn - pn / 5));
            // the product matching the parity of n carries the forced lambda growth
            const zp::Poly& circ = n % 2 == 1 ? pr.plus : pr.minus;
            auto inv = mu_lambda(lpoly_from_int(Q, circ));
            CHECK(*inv.mu == 0);
            CHECK(*inv.lambda == (k - 1) * q_n(5, n));
        }
    }
}

TEST_CASE("norm and projection") {
    PrimeContext ctx(5, 25);
    auto Q = LocalField::rational(ctx);
    Rng rng;
    GroupRingPoly one(Q, 0);
    one[0] = LocalElem::one(Q);
    auto nu = one.norm_to(1);
    for (int i = 0; i < 5; ++i) CHECK(nu[i].congruent(LocalElem::from_int(Q, phi_poly(5, 1)[i]), 25));
    for (int n = 1; n <= 2; ++n) {
        GroupRingPoly F = GroupRingPoly::from_poly(Q, n, random_poly(Q, 10, 0, 3, rng));
        auto back = F.norm_to(n + 1).project_to(n);
        for (long i = 0; i < F.size(); ++i) CHECK(back[i].congruent(F[i].times_int(5), 20));
    }
}

TEST_CASE("reduction modulo omega_n keeps invariants") {
    PrimeContext ctx(5, 30);
    auto Q = LocalField::rational(ctx);
    auto R = hensel_factor(zp::Poly{-1, -1, 1}, ctx)[0];
    Rng rng;
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const auto& L = t % 2 ? R : Q;
        int n = 1 + t % 2;
        long pn = n == 1 ? 5 : 25;
        long lambda = rng.uniform(0, pn - 1), mu = rng.uniform(0, 2);
        LPoly f = random_poly(L, pn + 12, mu, lambda, rng);
        auto before = mu_lambda(f);
        REQUIRE(*before.lambda == lambda);
        auto after = mu_lambda(GroupRingPoly::from_poly(L, n, f));
        CHECK(*after.mu == *before.mu);
        CHECK(*after.lambda == *before.lambda);
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("congruent mod (varpi, omega_n) with mu = 0") {
    PrimeContext ctx(7, 30);
    auto Q = LocalField::rational(ctx);
    Rng rng;
    for (int t = 0; t < 200; ++t) {
        int n = 1 + t % 2;
        long pn = n == 1 ? 7 : 49;
        long lambda = rng.uniform(0, pn - 1);
        LPoly F = random_poly(Q, pn + 5, 0, lambda, rng);
        // G = (F + 7 H) mod omega_n, so F = G mod (7, omega_n)
        LPoly H = random_poly(Q, pn + 5, 0, rng.uniform(0, pn - 1), rng);
        LPoly sum = F;
        for (size_t i = 0; i < sum.size(); ++i) sum[i] += H[i].times_int(7);
        auto G = GroupRingPoly::from_poly(Q, n, sum);
        auto a = mu_lambda(F), b = mu_lambda(G);
        CHECK(*a.mu == *b.mu);
        CHECK(*a.lambda == *b.lambda);
    }
}

TEST_CASE("twist and generator change preserve invariants") {
    PrimeContext ctx(5, 30);
    auto Q = LocalField::rational(ctx);
    Rng rng;
    LocalElem u = LocalElem::from_int(Q, 6);
    // tw(X, 1) = uX + (u - 1)
    GroupRingPoly X(Q, 1);
    X[1] = LocalElem::one(Q);
    auto tX = X.tw(1, u);
    CHECK(tX[0].congruent(LocalElem::from_int(Q, 5), 30));
    CHECK(tX[1].congruent(u, 30));
    for (int t = 0; t < 40; ++t) {
        int n = 1 + t % 2;
        long lambda = rng.uniform(0, n == 1 ? 4 : 24);
        auto F = GroupRingPoly::from_poly(Q, n, random_poly(Q, n == 1 ? 4 : 24, rng.uniform(0, 1), lambda, rng));
        auto base = mu_lambda(F);
        long i = rng.uniform(-3, 3);
        auto T = F.tw(i, u);
        auto tinv = mu_lambda(T);
        CHECK(*tinv.mu == *base.mu);
        CHECK(*tinv.lambda == *base.lambda);
        auto back = T.tw(-i, u);
        for (long k = 0; k < F.size(); ++k) CHECK(back[k].congruent(F[k], 20));
        for (long c : {2L, 3L, 7L, 13L}) {
            auto G = F.change_generator(c);
            auto ginv = mu_lambda(G);
            CHECK(*ginv.mu == *base.mu);
            CHECK(*ginv.lambda == *base.lambda);
        }
    }
}

TEST_CASE("multiplicativity at finite level") {
    PrimeContext ctx(5, 30);
    auto Q = LocalField::rational(ctx);
    Rng rng;
    for (int t = 0; t < 30; ++t) {
        long l1 = rng.uniform(0, 10), l2 = rng.uniform(0, 10);
        auto F = GroupRingPoly::from_poly(Q, 2, random_poly(Q, 24, rng.uniform(0, 1), l1, rng));
        auto G = GroupRingPoly::from_poly(Q, 2, random_poly(Q, 24, rng.uniform(0, 1), l2, rng));
        auto a = mu_lambda(F), b = mu_lambda(G), c = mu_lambda(F * G);
        CHECK(*c.mu == *a.mu + *b.mu);
        CHECK(*c.lambda == *a.lambda + *b.lambda);
    }
}

TEST_CASE("valuation at a primitive root of unity") {
    PrimeContext ctx(5, 40);
    auto Q = LocalField::rational(ctx);
    GroupRingPoly X(Q, 1);
    X[1] = LocalElem::one(Q);
    auto zx = eval_val_at_zeta(X, 1);
    CHECK(zx.direct == mpq_class(1, 4));
    GroupRingPoly c(Q, 2);
    c[0] = LocalElem::from_int(Q, 5);
    CHECK(eval_val_at_zeta(c, 2).direct == 1);

    Rng rng;
    int agreed = 0;
    for (int t = 0; t < 20; ++t) {
        int n = 1 + t % 2;
        long phi = n == 1 ? 4 : 20;
        long lambda = rng.uniform(0, phi - 1);
        auto F = GroupRingPoly::from_poly(Q, n, random_poly(Q, n == 1 ? 4 : 24, rng.uniform(0, 2), lambda, rng));
        auto z = eval_val_at_zeta(F, n);
        REQUIRE(z.hypothesis_holds);
        CHECK(z.direct == *z.closed_form);
        agreed += z.direct == *z.closed_form;
    }
    CHECK(agreed == 20);
    // a form with (mu, lambda) = (0, 2) at level 1
    LPoly quad{LocalElem::from_int(Q, 30), LocalElem::from_int(Q, 10), LocalElem::one(Q)};
    auto F = GroupRingPoly::from_poly(Q, 1, quad);
    CHECK(eval_val_at_zeta(F, 1).direct == mpq_class(1, 2));
}
