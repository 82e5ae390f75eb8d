#include <algorithm>
#include <random>

#include "doctest.h"
#include "imt/error.hpp"
#include "imt/padic/local.hpp"

using namespace imt;

namespace {

zp::Poly zpoly(std::initializer_list<long> c) {
    zp::Poly r;
    for (long v : c) r.emplace_back(v);
    return r;
}

LocalElem random_elem(const FieldRef& L, std::mt19937_64& rng, int max_shift = 2) {
    std::vector<mpz_class> c(L->degree());
    std::uniform_int_distribution<long> dist(-200, 200);
    for (auto& v : c) v = dist(rng);
    std::uniform_int_distribution<int> sh(0, max_shift);
    return LocalElem::from_coeffs(L, c, sh(rng));
}

}  // namespace

TEST_CASE("F_p factorization reproduces the input") {
    const long p = 7;
    fp::Poly f{3, 0, 1, 5, 0, 2, 1};
    auto facs = fp::factor(f, p);
    fp::Poly prod{1};
    for (auto& fc : facs)
        for (int i = 0; i < fc.mult; ++i) prod = fp::mul(prod, fc.poly, p);
    CHECK(prod == fp::monic(f, p));
    // x^4 - 1 splits completely mod 5
    auto lin = fp::factor({4, 0, 0, 0, 1}, 5);
    CHECK(lin.size() == 4);
    // (x+1)^3 (x^2+2) mod 3
    fp::Poly g = fp::mul(fp::mul(fp::mul({1, 1}, {1, 1}, 3), {1, 1}, 3), {1, 0, 1}, 3);
    auto gf = fp::factor(g, 3);
    REQUIRE(gf.size() == 2);
    CHECK(gf[0].poly == fp::Poly{1, 1});
    CHECK(gf[0].mult == 3);
    CHECK(gf[1].poly == fp::Poly{1, 0, 1});
}

TEST_CASE("teichmuller") {
    PrimeContext ctx(5, 2);
    CHECK(teichmuller_int(1, ctx) == 1);
    CHECK(teichmuller_int(2, ctx) == 7);
    for (long p : {5L, 7L, 11L}) {
        PrimeContext c(p, 12);
        for (long a = 1; a < p; ++a) {
            mpz_class w = teichmuller_int(a, c), r;
            mpz_powm_ui(r.get_mpz_t(), w.get_mpz_t(), static_cast<unsigned long>(p - 1), c.modulus().get_mpz_t());
            CHECK(r == 1);
            CHECK(w % p == a);
            for (long b = 1; b < p; ++b) {
                mpz_class prod = w * teichmuller_int(b, c) % c.modulus();
                CHECK(prod == teichmuller_int(a * b % p, c));
            }
        }
    }
}

TEST_CASE("hensel_factor on small polynomials") {
    PrimeContext ctx(5, 20);
    auto triv = hensel_factor(zpoly({0, 1}), ctx);
    REQUIRE(triv.size() == 1);
    CHECK(triv[0]->ram() == 1);
    CHECK(triv[0]->res_degree() == 1);

    // x^2 - x - 1 has discriminant 5: one ramified quadratic factor
    auto ram = hensel_factor(zpoly({-1, -1, 1}), ctx);
    REQUIRE(ram.size() == 1);
    CHECK(ram[0]->ram() == 2);
    CHECK(ram[0]->res_degree() == 1);

    // x^2 - 6 splits over Q_5 (6 = 1 mod 5) and x^2 - 2 stays inert
    auto split = hensel_factor(zpoly({-6, 0, 1}), ctx);
    CHECK(split.size() == 2);
    auto inert = hensel_factor(zpoly({-2, 0, 1}), ctx);
    REQUIRE(inert.size() == 1);
    CHECK(inert[0]->res_degree() == 2);

    // products of factors reproduce m mod p^M
    zp::Poly m = zpoly({-6, 0, 1});
    zp::Poly prod{1};
    for (auto& f : split) prod = zp::mul(prod, f->defining(), ctx.modulus());
    CHECK(prod == zp::reduce(m, ctx.modulus()));

    // x^3 - 5 is Eisenstein
    auto eis = hensel_factor(zpoly({-5, 0, 0, 1}), ctx);
    REQUIRE(eis.size() == 1);
    CHECK(eis[0]->ram() == 3);
    // single Newton slope 3/2 with the residual lift y
    auto steep = hensel_factor(zpoly({125, 0, 1}), ctx);
    REQUIRE(steep.size() == 1);
    CHECK(steep[0]->ram() == 2);
    CHECK(!steep[0]->monogenic());
}

TEST_CASE("local factors with a changed generator") {
    PrimeContext ctx(5, 20);
    // y^2 = 50: the root is 5 times a generator of the unramified quadratic extension
    auto inert = local_factors(zpoly({-50, 0, 1}), ctx);
    REQUIRE(inert.size() == 1);
    CHECK(inert[0].field->res_degree() == 2);
    CHECK(*inert[0].root.valuation() == 1);
    CHECK((inert[0].root * inert[0].root - LocalElem::from_int(inert[0].field, 50)).is_zero());

    // two roots of valuation 1 and a ramified pair of valuation 1/2, all congruent to 0
    // (y - 5)(y^2 - 5) = y^3 - 5y^2 - 5y + 25
    auto mixed = local_factors(zpoly({25, -5, -5, 1}), ctx);
    REQUIRE(mixed.size() == 2);
    CHECK(mixed[0].field->degree() == 1);
    CHECK(*mixed[0].root.valuation() == 1);
    CHECK(mixed[1].field->ram() == 2);
    CHECK(*mixed[1].root.valuation() == 1);

    // (y - 1)(y - 26)(y - 51): one residue class, three Q_5 roots of distinct digits
    zp::Poly cubic = zp::mul(zp::mul(zpoly({-1, 1}), zpoly({-26, 1}), 0), zpoly({-51, 1}), 0);
    auto roots = local_factors(cubic, ctx);
    REQUIRE(roots.size() == 3);
    std::vector<mpz_class> got;
    for (auto& f : roots) got.push_back(f.root.to_rationals()[0].get_num());
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<mpz_class>{1, 26, 51});

    // a minimal polynomial from a weight-16 Hecke field with a mixed block at 5
    zp::Poly quintic = zpoly({-191201762304, 1213667712, 21593520, -92358, -273, 1});
    auto qf = local_factors(quintic, ctx);
    int total = 0;
    for (auto& f : qf) {
        total += f.field->degree();
        LocalElem val = LocalElem::zero(f.field), pw = LocalElem::one(f.field);
        for (auto& c : quintic) {
            val += pw * LocalElem::from_int(f.field, c);
            pw *= f.root;
        }
        CHECK(val.valuation_lower_bound() >= f.field->ram() * 15);
    }
    CHECK(total == 5);
}

TEST_CASE("valuations") {
    PrimeContext ctx(5, 30);
    auto Q = LocalField::rational(ctx);
    CHECK(*LocalElem::from_int(Q, 1).valuation() == 0);
    CHECK(*LocalElem::from_int(Q, 250).valuation() == 3);
    CHECK(*LocalElem::from_rational(Q, mpq_class(3, 125)).valuation() == -3);
    CHECK(!LocalElem::zero(Q).valuation().has_value());
    CHECK(*LocalElem::from_int(Q, 15).valuation() == 1);

    auto ram = hensel_factor(zpoly({-1, -1, 1}), ctx)[0];
    CHECK(*LocalElem::from_int(ram, 5).valuation() == 2);
    CHECK(*LocalElem::uniformizer(ram).valuation() == 1);

    auto steep = hensel_factor(zpoly({125, 0, 1}), ctx)[0];
    CHECK(*LocalElem::uniformizer(steep).valuation() == 1);
    CHECK(*LocalElem::generator(steep).valuation() == 3);

    std::mt19937_64 rng(11);
    for (auto L : {Q, ram, steep, hensel_factor(zpoly({-2, 0, 1}), ctx)[0], hensel_factor(zpoly({-5, 0, 0, 1}), ctx)[0]}) {
        for (int t = 0; t < 40; ++t) {
            LocalElem a = random_elem(L, rng), b = random_elem(L, rng);
            if (a.is_zero() || b.is_zero()) continue;
            CHECK(*(a * b).valuation() == *a.valuation() + *b.valuation());
            CHECK(*a.valuation() == *a.valuation_by_norm());
            LocalElem ai = a.inverse();
            CHECK((a * ai - LocalElem::one(L)).valuation_lower_bound() >= 10);
        }
    }
}

TEST_CASE("hecke roots") {
    PrimeContext ctx(5, 40);
    auto Q = LocalField::rational(ctx);
    SUBCASE("a_p = 0, weight 2") {
        auto r = hecke_roots(LocalElem::zero(Q), LocalElem::one(Q), 2);
        CHECK(r.extended);
        CHECK((r.alpha + r.beta).valuation_lower_bound() >= 30);
        CHECK((r.alpha * r.alpha + LocalElem::from_int(r.field, 5)).valuation_lower_bound() >= 30);
    }
    SUBCASE("two slopes: 27.4.a.b has a_5 = 15") {
        auto a = LocalElem::from_int(Q, 15);
        auto r = hecke_roots(a, LocalElem::one(Q), 4);
        CHECK(!r.extended);
        CHECK(*r.alpha.valuation() == 1);
        CHECK(*r.beta.valuation() == 2);
        CHECK((r.alpha + r.beta - a).valuation_lower_bound() >= 30);
        CHECK((r.alpha * r.beta - LocalElem::from_int(Q, 125)).valuation_lower_bound() >= 30);
    }
    SUBCASE("min slope law") {
        for (int k : {2, 3, 4, 5, 6, 8}) {
            for (long ap : {5L, 10L, 25L, 50L, 125L, 0L}) {
                auto a = LocalElem::from_int(Q, ap);
                HeckeRoots r;
                try {
                    r = hecke_roots(a, LocalElem::one(Q), k);
                } catch (const PrecisionExhausted&) {
                    continue;  // equal-slope polynomial with close roots
                }
                mpq_class va = r.alpha.ord_p(), vb = r.beta.ord_p();
                mpq_class half(k - 1, 2);
                half.canonicalize();
                mpq_class expect = ap == 0 ? half : std::min(mpq_class(zp::ord_p(ap, 5, 99)), half);
                CHECK(std::min(va, vb) == expect);
                CHECK(va + vb == k - 1);
            }
        }
    }
}
