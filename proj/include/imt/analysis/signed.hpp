#pragma once

// Signed invariants read off a series of Mazur-Tate (μ, λ) pairs, and the
// comparisons built on them.

#include <gmpxx.h>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imt/iwasawa/group_ring.hpp"
#include "imt/modsym/eigen.hpp"

namespace imt {

struct InvariantPoint {
    int n = 0;
    std::optional<long> mu, lambda;  // both nullopt for a zero element
    bool operator==(const InvariantPoint&) const = default;
};

enum class LambdaPattern {
    Stable,         // λ(Θ_n) - (k-1)q_n constant on each parity from n0 on
    WeightPPlusOne, // the same at k = p + 1, with λ♭ shifted by p - 1 against the companion
    Corestriction,  // λ(Θ_n) = λ(Θ_{n-1}(g)) + p^n - p^(n-1)
    None,
};
const char* to_string(LambdaPattern pattern);

struct SignedReport {
    std::string label;
    long p = 0;
    int prime_index = 0, i = 0, j = 0, k = 0;
    std::vector<InvariantPoint> points;  // sorted by n
    std::optional<long> mu;              // common μ over the stable range
    std::optional<long> lambda_sharp, lambda_flat;
    int n0 = 0, n_max = 0;
    LambdaPattern pattern = LambdaPattern::None;
    bool mu_hypothesis = false;  // μ finite and constant on both parities of the stable range
    std::string note;
};

// Needs two points of each parity (InsufficientData otherwise). The stable range
// is n >= n0 with n0 minimal and n_max >= n0 + 2. The companion series g is used
// only when the direct pattern fails, or to check the weight p + 1 shift.
SignedReport extract_signed(std::vector<InvariantPoint> points, int k, long p,
                            std::span<const InvariantPoint> companion = {});

struct LowerBoundEntry {
    int n = 0;
    long lambda = 0, bound = 0;  // bound = (k-1)q_n + k - 2
    bool ok = false, tight = false;
};
struct LowerBoundVerdict {
    std::vector<LowerBoundEntry> entries;  // odd n in the stable range
    bool ok = false;
    bool tight = false;  // λ♭ = k - 2
};
LowerBoundVerdict check_lower_bound(const SignedReport& report, int k);

struct BKValuation {
    mpq_class value;                 // μ ord_p(ϖ) + ((k-1)q_n + λ*) / φ(p^n)
    bool hypothesis_ok = false;      // ord_p(ϖ) > p(k-1)/(p^2-1)
    std::optional<mpq_class> direct; // ord_p Θ_n(ζ_{p^n} - 1) when a Θ_n was given
    bool agrees = false;
};
// ram is the ramification index of the coefficient field; InsufficientData
// when the report has no λ* or μ for the parity of n
BKValuation bk_valuation(const SignedReport& report, int n, long ram, const GroupRingPoly* theta_n = nullptr);

struct CorestrictionCheck {
    int n = 0;
    std::optional<long> mu_f;
    bool congruent = false;
    fp::Poly scalar;  // c with ϖ^(-μ) Θ_n(f) ≡ c ν Θ_{n-1}(g) on the residue field
    std::string failure;
};
// compares up to a residue-field scalar, since each symbol is normalized only up to a unit
CorestrictionCheck corestriction_congruence(const GroupRingPoly& theta_f_n, const GroupRingPoly& theta_g_prev);

struct LambdaComparison {
    int n = 0;
    std::optional<long> lambda_f, lambda_g;
    bool equal = false;
};
struct PairVerdict {
    std::vector<LambdaComparison> lambdas;  // n present in both reports
    bool lambdas_equal = false;
    bool symbols_compared = false;
    std::optional<fp::Poly> symbol_scalar;  // set when the reduced symbols agree up to it
    std::vector<CorestrictionCheck> corestriction;
};
struct ThetaPair {
    const GroupRingPoly& f_n;
    const GroupRingPoly& g_prev;
};
PairVerdict compare_pair(const SignedReport& f, const SignedReport& g, const ReducedSymbol* f_sym = nullptr,
                         const ReducedSymbol* g_sym = nullptr, std::span<const ThetaPair> thetas = {});

}  // namespace imt
