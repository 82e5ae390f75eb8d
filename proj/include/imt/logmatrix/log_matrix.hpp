#pragma once

// Finite-level logarithmic matrices C_{n,f} and the signed decomposition of
// Mazur-Tate elements through them. Coefficients a_p and ε(p) must lie in Z_p.

#include <optional>
#include <string>
#include <vector>

#include "imt/iwasawa/group_ring.hpp"
#include "imt/logmatrix/pi_series.hpp"

namespace imt {

// The inverse Mellin transform of (1+π)φ^n(P^{-1})⋯φ(P^{-1}) is computed exactly
// modulo (1+π)^(p^level) - 1, where it is a change of basis. The measure lives
// on 1 + pZ_p, so every ω^i-component gives the same matrix.
struct CMatrix {
    long p = 0;
    int n = 0, k = 0, level = 0, M = 0;
    std::uint64_t a_p = 0, eps_p = 0;
    TwoByTwo<zp::Poly> entries;  // modulo ω_{n,k-1}, degree < (k-1)p^n
    TwoByTwo<zp::Poly> full;     // modulo ω_{level-1}
    // entries are exact modulo ω_n; modulo ω_{n,k-1} they are known mod p^reliable_prec
    int reliable_prec = 0;
    bool support_ok = false;  // no mass outside 1 + pZ_p
};

// level 0 picks n + ceil(log_p(k-1)) + 1
CMatrix c_matrix(const LocalElem& a_p, const LocalElem& eps_p, int k, int n, const PrimeContext& ctx, int level = 0);

// reduction of a Z_p-valued local element (throws NonIntegral or HypothesisViolated)
std::uint64_t to_residue(const LocalElem& x, const ModArith& R);

struct CnfVerdict {
    bool ok = false;
    std::string failure;
    // reductions mod p of the two entries predicted to be unit multiples of Φ^±
    fp::Poly minus_cofactor, plus_cofactor;
};
// odd n: [[0, *Φ+], [*Φ-, 0]]; even n: [[*Φ-, 0], [0, *Φ+]] modulo p
CnfVerdict check_cnf_structure(const CMatrix& C);

struct StabilizationResidual {
    int exact_val = 0;  // min ord_p of ε p^(k-1)(C_n - A C_{n+1}) modulo ω_n
    int full_val = 0;   // the same modulo ω_{n,k-1}
    int expected_full = 0;
};
StabilizationResidual stabilization_residual(const CMatrix& Cn, const CMatrix& Cnext);

enum class SignedKind { Sharp, Flat };
const char* to_string(SignedKind s);

struct ComponentCheck {
    int m = 0;           // factor Φ_m of ω_n
    long ram = 1;        // φ(p^m), the X-adic valuation of p
    std::optional<long> det_val;  // X-adic; nullopt when det vanishes to precision
    std::optional<long> residual_val;  // rank-one consistency, nullopt when zero
    bool consistent = true;
};

struct SignedSolve {
    int n = 0;
    SignedKind kind = SignedKind::Flat;
    long mu_shift = 0;       // the Mazur-Tate element was divided by p^mu_shift
    bool divisible = false;  // its reduction is divisible by the predicted Φ^±
    fp::Poly cofactor;       // L_kind mod (p, X^length)
    long length = 0;
    std::optional<long> lambda;
    std::vector<ComponentCheck> components;
    bool consistent = false;
    int precision = 0;
};

// [Q_n; -ε p^(k-2) ν Q_{n-1}] = C [L♯; L♭] modulo ω_n at j = 0, checked on
// each factor Φ_m of ω_n, plus the mod-p shortcut giving L♭ (odd n) or L♯ (even n).
SignedSolve solve_signed(const GroupRingPoly& Qn, const GroupRingPoly& Qprev, const CMatrix& C, int guard = 5);

}  // namespace imt
