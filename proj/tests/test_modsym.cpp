#include <doctest.h>

#include <random>

#include "imt/modsym/eigen.hpp"
#include "imt/modsym/qpoly.hpp"
#include "imt/modsym/space.hpp"

using namespace imt;

namespace {

std::vector<qp::Factor> sign_charpoly(const ModSymSpace& M, long ell, int sign) {
    auto B = M.cuspidal_sign_basis(sign);
    auto T = la::restrict_to(M.hecke(ell), B);
    return qp::factor_monic(qp::to_z(la::charpoly(T)));
}

}  // namespace

TEST_CASE("cuspidal dimensions") {
    ModSymSpace m11(11, 2, DirichletCharacter::trivial(11));
    CHECK(m11.cuspidal_dimension() == 2);
    CHECK(m11.dimension() == 3);
    ModSymSpace m1(1, 12, DirichletCharacter::trivial(1));
    CHECK(m1.cuspidal_dimension() == 2);
    CHECK(gamma1_cuspidal_dimension(13, 2) == 4);
}

TEST_CASE("hecke eigenvalues") {
    ModSymSpace m11(11, 2, DirichletCharacter::trivial(11));
    auto f = sign_charpoly(m11, 2, 1);
    REQUIRE(f.size() == 1);
    CHECK(f[0].poly == zp::Poly{2, 1});
    ModSymSpace m1(1, 12, DirichletCharacter::trivial(1));
    auto g = sign_charpoly(m1, 2, -1);
    REQUIRE(g.size() == 1);
    CHECK(g[0].poly == zp::Poly{24, 1});
}

TEST_CASE("eigen symbols") {
    auto M = std::make_shared<const ModSymSpace>(27, 4, DirichletCharacter::trivial(27));
    auto syms = eigen_decompose(M, 1);
    bool found = false;
    for (auto& s : syms) {
        if (s.field().degree() != 1) continue;
        if (s.hecke_eigenvalue(2) == s.field().from_rational(3)) {
            found = true;
            CHECK(s.hecke_eigenvalue(5) == s.field().from_rational(15));
        }
    }
    CHECK(found);
}

namespace {

struct SpaceCase {
    long N;
    int k;
    const char* chi;
};

const SpaceCase kSpaces[] = {{11, 2, "trivial"}, {13, 2, "order:6;2=1"}, {27, 4, "trivial"}, {7, 3, "kronecker:-7"}, {8, 3, "kronecker:-8"}};

std::shared_ptr<const ModSymSpace> make_space(const SpaceCase& c) {
    return std::make_shared<const ModSymSpace>(c.N, c.k, DirichletCharacter::parse(c.N, c.chi));
}

bool same(const la::Mat& a, const la::Mat& b) { return (a - b).is_zero(); }

Mat2 random_gamma0(std::mt19937_64& rng, long N) {
    std::uniform_int_distribution<long> dist(-9, 9);
    for (;;) {
        long c = N * dist(rng), d = dist(rng);
        long x, y;
        if (ext_gcd(c, d, x, y) != 1) continue;
        // a d - b c = 1 with a = y, b = -x after ext_gcd(c, d) = c x + d y
        Mat2 g{y, -x, c, d};
        if (g.det() == 1) return g;
    }
}

QCusp random_cusp(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-40, 40), den(0, 25);
    long d = den(rng);
    if (d == 0) return QCusp::infinity();
    return QCusp::rational(num(rng), d);
}

}  // namespace

TEST_CASE("hecke operators commute with each other and with star") {
    for (auto& c : kSpaces) {
        auto M = make_space(c);
        la::Mat S = M->star();
        CHECK(same(S * S, la::Mat::identity(M->dimension())));
        std::vector<long> ells;
        for (long ell : {2L, 3L, 5L, 7L})
            if (c.N % ell != 0) ells.push_back(ell);
        for (size_t a = 0; a < ells.size(); ++a) {
            la::Mat Ta = M->hecke(ells[a]);
            CHECK(same(Ta * S, S * Ta));
            for (size_t b = a + 1; b < ells.size(); ++b) {
                la::Mat Tb = M->hecke(ells[b]);
                CHECK(same(Ta * Tb, Tb * Ta));
            }
        }
    }
}

TEST_CASE("boundary vanishes on the cuspidal subspace") {
    for (auto& c : kSpaces) {
        auto M = make_space(c);
        for (auto& v : M->cuspidal_basis()) CHECK(la::is_zero(la::vec_mat(v, M->boundary())));
    }
}

TEST_CASE("eigen-symbols satisfy the Manin relations") {
    std::mt19937_64 rng(5);
    for (auto& c : kSpaces) {
        auto M = make_space(c);
        const int w = c.k - 2;
        const Mat2 sigma{0, -1, 1, 0}, tau{0, -1, 1, -1};
        const Mat2 tau2 = tau * tau;
        for (int sign : {1, -1}) {
            for (auto& s : eigen_decompose(M, sign)) {
                const NumberField& K = s.field();
                for (int trial = 0; trial < 12; ++trial) {
                    std::uniform_int_distribution<long> dist(0, 4 * c.N);
                    long cc = dist(rng), dd = dist(rng);
                    std::vector<mpq_class> P(w + 1);
                    for (auto& x : P) x = std::uniform_int_distribution<int>(-3, 3)(rng);
                    auto at = [&](const Mat2& h) {
                        return s.manin_value(substitute(P, h), cc * h.a + dd * h.c, cc * h.b + dd * h.d);
                    };
                    const Mat2 one{1, 0, 0, 1};
                    CHECK(NumberField::is_zero(K.add(at(one), at(sigma))));
                    CHECK(NumberField::is_zero(K.add(K.add(at(one), at(tau)), at(tau2))));
                }
            }
        }
    }
}

TEST_CASE("evaluation: additivity and invariance") {
    std::mt19937_64 rng(17);
    for (auto& c : kSpaces) {
        auto M = make_space(c);
        auto syms = eigen_decompose(M, 1);
        REQUIRE(!syms.empty());
        const EigenSymbol& s = syms.front();
        const NumberField& K = s.field();
        auto add = [&](const KPoly& a, const KPoly& b) {
            KPoly r(a.size());
            for (size_t i = 0; i < a.size(); ++i) r[i] = K.add(a[i], b[i]);
            return r;
        };
        auto is_zero = [&](const KPoly& a) {
            for (auto& x : a)
                if (!NumberField::is_zero(x)) return false;
            return true;
        };
        for (int trial = 0; trial < 8; ++trial) {
            QCusp r = random_cusp(rng), m = random_cusp(rng), t = random_cusp(rng);
            CHECK(is_zero(s.evaluate(r, r)));
            KPoly lhs = add(s.evaluate(r, m), s.evaluate(m, t));
            KPoly rhs = s.evaluate(r, t);
            for (size_t i = 0; i < lhs.size(); ++i) CHECK(K.sub(lhs[i], rhs[i]) == K.zero());
        }
        for (int trial = 0; trial < 5; ++trial) {
            Mat2 g = random_gamma0(rng, c.N);
            QCusp r = random_cusp(rng), t = random_cusp(rng);
            KPoly moved = act_right(K, s.evaluate(act(g, r), act(g, t)), g);
            KPoly base = s.evaluate(r, t);
            KElem chi = s.character_value(g.d);
            for (size_t i = 0; i < base.size(); ++i) CHECK(K.sub(moved[i], K.mul(chi, base[i])) == K.zero());
        }
    }
}

TEST_CASE("normalization at a prime above p") {
    auto M = std::make_shared<const ModSymSpace>(27, 4, DirichletCharacter::trivial(27));
    PrimeContext ctx(5, 40);
    for (auto& s : eigen_decompose(M, 1)) {
        if (s.field().degree() != 1 || s.hecke_eigenvalue(2) != s.field().from_rational(3)) continue;
        NormalizedSymbol phi(s, EmbeddedNumberField::make(s.field().minpoly(), 1, ctx));
        long best = 1 << 20;
        for (int i = 0; i < M->p1().size(); ++i)
            for (int t = 0; t <= 2; ++t) {
                const long binom[] = {1, 2, 1};
                KElem x = s.field().scale(s.generator_value(i, t), mpq_class(binom[t]));
                if (NumberField::is_zero(x)) continue;
                best = std::min(best, *phi.embed(x).valuation());
            }
        CHECK(best == 0);

        // the filtration level is at most ord_p(a_p) = 1
        auto fil = filtration_level(phi, 5);
        CHECK(fil.r <= 1);
        CHECK(fil.t <= fil.r);
        CHECK(mu_min(phi, 5) >= 0);

        auto red = phi_k_reduce(phi);
        auto c = compare_phi(red, red);
        REQUIRE(c.has_value());
        CHECK(*c == fp::Poly{1});
    }
}

TEST_CASE("theta_k lift") {
    const long p = 5;
    // P = 1 gives X^p Y - X Y^p (coefficient of X^j Y^(k-2-j) at index j)
    auto one = theta_k_lift(fp::Poly{1}, p);
    fp::Poly expect(p + 2, 0);
    expect[p] = 1;
    expect[1] = p - 1;
    CHECK(one == expect);

    std::mt19937_64 rng(3);
    auto act = [&](const fp::Poly& P, const Mat2& g) {
        std::vector<mpq_class> Q(P.begin(), P.end());
        auto R = substitute(Q, Mat2{g.d, -g.b, -g.c, g.a});
        fp::Poly out(P.size());
        for (size_t i = 0; i < P.size(); ++i) {
            mpz_class v = R[i].get_num() % p;
            out[i] = fp::reduce(v.get_si(), p);
        }
        return out;
    };
    for (int trial = 0; trial < 5; ++trial) {
        fp::Poly P(4);
        for (auto& x : P) x = std::uniform_int_distribution<long>(0, p - 1)(rng);
        auto th = theta_k_lift(P, p);
        // Φ_k ∘ θ_k = 0: the Y^(k-2) coefficient vanishes
        CHECK(th[0] == 0);
        // S_0(p): c = 0 mod p, a d != 0 mod p
        std::uniform_int_distribution<long> dist(1, p - 1);
        Mat2 g{dist(rng), std::uniform_int_distribution<long>(0, p - 1)(rng), 0, dist(rng)};
        auto lhs = theta_k_lift(act(P, g), p);
        auto rhs = act(th, g);
        long det = g.det() % p;
        for (auto& x : lhs) x = fp::reduce(x * det, p);
        CHECK(lhs == rhs);
    }
}
