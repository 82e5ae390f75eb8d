#pragma once

// Weight-k modular symbols for Γ0(N) with a Dirichlet character, presented by
// Manin symbols [P,(c:d)] and computed over Q by restriction of scalars from
// the character field Q(ζ_m). The quotient basis consists of symbols
// ζ^w [X^t Y^(k-2-t), (c:d)].

#include <gmpxx.h>

#include <vector>

#include "imt/modsym/character.hpp"
#include "imt/modsym/linalg.hpp"
#include "imt/modsym/number_field.hpp"

namespace imt {

struct Mat2 {
    long a, b, c, d;
    long det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    bool operator==(const Mat2&) const = default;
};

// coefficients (in X^j Y^(w-j), j = 0..w) of P(aX+bY, cX+dY) for P = X^t Y^(w-t)
std::vector<mpz_class> substitute_monomial(int t, int w, const Mat2& m);
// same for an arbitrary polynomial
std::vector<mpq_class> substitute(const std::vector<mpq_class>& P, const Mat2& m);

// extended gcd: returns g and sets x, y with a x + b y = g
long ext_gcd(long a, long b, long& x, long& y);
// a matrix in SL2(Z) whose bottom row is congruent to (c, d) mod N
Mat2 lift_to_sl2(long c, long d, long N);

class P1List {
public:
    explicit P1List(long N);
    long level() const { return N_; }
    int size() const { return static_cast<int>(reps_.size()); }
    std::pair<long, long> rep(int i) const { return reps_[i]; }
    // (index, λ) with (c, d) ≡ λ·rep mod N; index -1 when gcd(c, d, N) > 1
    std::pair<int, long> normalize(long c, long d) const;
    // scalars λ ≠ 1 with λ·rep ≡ rep
    const std::vector<long>& stabilizer(int i) const { return stab_[i]; }

private:
    long N_;
    std::vector<std::pair<long, long>> reps_;
    std::vector<std::pair<int, long>> table_;
    std::vector<std::vector<long>> stab_;
};

struct SpaceLimits {
    long max_level_times_weight = 2000;
};

struct BasisSymbol {
    int t;      // monomial X^t Y^(k-2-t)
    int p1;     // index into P1List
    int zeta;   // power of the character root of unity
};

class ModSymSpace {
public:
    ModSymSpace(long N, int k, DirichletCharacter eps, SpaceLimits limits = {});

    long level() const { return N_; }
    int weight() const { return k_; }
    const DirichletCharacter& character() const { return eps_; }
    const P1List& p1() const { return p1_; }
    // character field Q(ζ_m) as Q[z]/Φ_m
    const NumberField& character_field() const { return field_; }
    int field_degree() const { return field_.degree(); }
    int dimension() const { return static_cast<int>(basis_.size()); }
    const std::vector<BasisSymbol>& basis() const { return basis_; }

    // quotient coordinates of ζ^zeta [P, (c, d)]
    la::Vec manin_vector(const std::vector<mpq_class>& P, long c, long d, long zeta = 0) const;
    // quotient coordinates of the generator ζ^zeta [X^t Y^(k-2-t), rep i]
    const la::Vec& generator(int t, int i, long zeta = 0) const;

    la::Mat hecke(long ell) const;
    la::Mat star() const;
    la::Mat zeta_action() const;
    const la::Mat& boundary() const { return boundary_; }
    int cusp_count() const { return static_cast<int>(cusps_.size()); }

    const std::vector<la::Vec>& cuspidal_basis() const { return cuspidal_; }
    int cuspidal_dimension() const { return static_cast<int>(cuspidal_.size()); }
    // basis of the sign subspace of the cuspidal space (star eigenvalue sign)
    std::vector<la::Vec> cuspidal_sign_basis(int sign) const;

private:
    struct Cusp {
        long u, v;
        Mat2 h;
        bool dead;
    };
    struct Mult {
        int sign;
        long e;
    };
    // coordinates of sign·ζ^e·(class cls, w) over Q written into the cusp space
    std::pair<int, Mult> cusp_class(long u, long v);
    void build_relations();
    void build_boundary();
    void add_generator(la::Vec& out, const mpq_class& coef, int t, int i, long zeta) const;

    long N_;
    int k_;
    DirichletCharacter eps_;
    P1List p1_;
    NumberField field_;
    long order_;
    std::vector<KElem> zeta_pow_;           // ζ^e in the power basis, e < order
    std::vector<la::Vec> gen_table_;        // [(i*(k-1)+t)*order + e]
    std::vector<BasisSymbol> basis_;
    std::vector<Cusp> cusps_;
    la::Mat boundary_;
    std::vector<la::Vec> cuspidal_;
};

// dimension of the cuspidal modular symbols for Γ1(N), summed over characters
int gamma1_cuspidal_dimension(long N, int k);

}  // namespace imt
