#pragma once

// Power series in π over Z/p^M, the operators φ and ψ, and the Mellin transform.

#include <cstdint>
#include <type_traits>
#include <utility>
#include <vector>

#include "imt/padic/local.hpp"

namespace imt {

// arithmetic modulo p^M for p^M < 2^62
class ModArith {
public:
    ModArith() = default;
    explicit ModArith(const PrimeContext& ctx);

    std::uint64_t modulus() const { return m_; }
    long p() const { return p_; }
    int precision() const { return M_; }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= m_ ? s - m_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + m_ - b; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m_);
    }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : m_ - a; }
    std::uint64_t from(const mpz_class& x) const;
    std::uint64_t from(long x) const;
    // ord_p, capped at M
    int ord(std::uint64_t a) const;

private:
    std::uint64_t m_ = 1;
    long p_ = 2;
    int M_ = 0;
};

class PiSeries {
public:
    PiSeries() = default;
    PiSeries(const ModArith& R, int trunc);
    static PiSeries constant(const ModArith& R, int trunc, std::uint64_t c);
    static PiSeries pi(const ModArith& R, int trunc);
    // (1+π)^a
    static PiSeries one_plus_pi_power(const ModArith& R, int trunc, long a);

    const ModArith& ring() const { return R_; }
    int trunc() const { return static_cast<int>(c_.size()); }
    std::uint64_t operator[](int i) const { return c_[i]; }
    std::uint64_t& operator[](int i) { return c_[i]; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }
    bool is_zero() const;
    // min ord_p of the coefficients below degree bound (M when all vanish)
    int min_ord(int bound) const;

    PiSeries& operator+=(const PiSeries& o);
    PiSeries& operator-=(const PiSeries& o);
    friend PiSeries operator+(PiSeries a, const PiSeries& b) { return a += b; }
    friend PiSeries operator-(PiSeries a, const PiSeries& b) { return a -= b; }
    friend PiSeries operator*(const PiSeries& a, const PiSeries& b);
    friend PiSeries operator-(const PiSeries& a) { return a.negated(); }
    PiSeries scaled(std::uint64_t s) const;
    PiSeries negated() const;
    PiSeries pow(long e) const;
    // the constant term must be a unit
    PiSeries inverse() const;

    // coefficients in the basis (1+π)^c, c < trunc
    std::vector<std::uint64_t> in_t_basis() const;
    static PiSeries from_t_basis(const ModArith& R, int trunc, const std::vector<std::uint64_t>& t);

private:
    ModArith R_;
    std::vector<std::uint64_t> c_;
};

// φ(π) = (1+π)^p - 1; exact below the truncation
PiSeries phi_op(const PiSeries& F);
// ψ((1+π)^a φ(G)) = G for a = 0 and 0 for 0 < a < p. The stored truncation is
// taken as an exact polynomial; throws TruncationTooSmall when trunc < p.
PiSeries psi_op(const PiSeries& F);

struct QDelta {
    PiSeries q;          // φ(π)/π
    PiSeries delta;      // p/(q - π^(p-1))
    PiSeries delta_inv;  // (q - π^(p-1))/p, a polynomial
};
QDelta q_delta(const ModArith& R, int trunc);

template <class T>
struct TwoByTwo {
    T a, b, c, d;  // [[a, b], [c, d]]

    friend TwoByTwo operator*(const TwoByTwo& x, const TwoByTwo& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    T det() const { return a * d - b * c; }
    TwoByTwo adjugate() const { return {d, -b, -c, a}; }
    template <class F>
    auto map(F&& f) const {
        using U = std::decay_t<decltype(f(a))>;
        return TwoByTwo<U>{f(a), f(b), f(c), f(d)};
    }
};

// P_f^{-1} = [[a_p δ^(1-k), δ^(1-k)], [-ε q^(k-1), 0]]
TwoByTwo<PiSeries> pf_inverse(std::uint64_t a_p, std::uint64_t eps_p, int k, const ModArith& R, int trunc);
// P_f = S / (ε q^(k-1)); returns S = [[0, -1], [ε δ^(k-1) q^(k-1), a_p]] and ε q^(k-1)
std::pair<TwoByTwo<PiSeries>, PiSeries> pf_scaled(std::uint64_t a_p, std::uint64_t eps_p, int k, const ModArith& R,
                                                  int trunc);

// finitely supported measure: mass[c] on the class c mod p^level
struct LevelMeasure {
    long p = 0;
    int level = 0;
    std::vector<std::uint64_t> mass;
};

// Σ mass[c] (1+π)^c; requires trunc >= p^level
PiSeries mellin(const LevelMeasure& A, const ModArith& R, int trunc);
// Read the base-p digits of the exponents of (1+π): writing the series as
// Σ_a (1+π)^a φ(F_a) and recursing on F_a. Throws NotInPsiZero when the mass of
// some class divisible by p is not 0 mod p^(M-guard).
LevelMeasure mellin_inverse(const PiSeries& F, int level, int guard = 0);

}  // namespace imt
