#pragma once

// Hecke eigen-symbols: a linear functional on a modular symbol space with
// values in a Hecke field K, turned into a map from degree-zero divisors to
// polynomials in X, Y.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "imt/modsym/number_field.hpp"
#include "imt/modsym/space.hpp"
#include "imt/padic/local.hpp"

namespace imt {

// a point of P^1(Q); den == 0 is the cusp at infinity
struct QCusp {
    long num, den;
    static QCusp infinity() { return {1, 0}; }
    static QCusp rational(long num, long den);
    bool is_infinity() const { return den == 0; }
};
QCusp act(const Mat2& g, const QCusp& x);

// sum_j b_j X^j Y^(k-2-j)
using KPoly = std::vector<KElem>;
// P|γ = P(dX - cY, -bX + aY)
KPoly act_right(const NumberField& K, const KPoly& P, const Mat2& g);

struct DecomposeOptions {
    long check_bound = 13;  // verify eigenvalues for primes up to this bound
    long avoid_prime = 0;   // never used as a Hecke generator
};

class EigenSymbol {
public:
    // verifies the eigenvalue property for primes up to check_bound
    EigenSymbol(std::shared_ptr<const ModSymSpace> space, NumberFieldRef field, int sign,
                std::vector<la::Vec> functional, std::string generator, long check_bound);

    const ModSymSpace& space() const { return *space_; }
    const std::shared_ptr<const ModSymSpace>& space_ptr() const { return space_; }
    const NumberField& field() const { return *field_; }
    const NumberFieldRef& field_ptr() const { return field_; }
    int sign() const { return sign_; }
    int weight() const { return space_->weight(); }
    long level() const { return space_->level(); }
    const std::string& generator() const { return generator_; }

    KElem hecke_eigenvalue(long ell) const;
    // a_n from the prime eigenvalues (n coprime to the level)
    KElem coefficient(long n) const;
    KElem character_value(long a) const;
    // value λ([X^t Y^(k-2-t), (c:d)]) for the P1 representative with index i
    const KElem& generator_value(int i, int t) const { return values_[static_cast<size_t>(i) * (weight() - 1) + t]; }
    // λ of the Manin symbol [P, (c, d)]
    KElem manin_value(const std::vector<mpq_class>& P, long c, long d) const;
    // λ(P {from, to})
    KElem path_value(const std::vector<mpq_class>& P, const QCusp& from, const QCusp& to) const;
    // λ(X^t Y^(k-2-t) {from, to}) for all t
    std::vector<KElem> path_values(const QCusp& from, const QCusp& to) const;
    // the polynomial-valued symbol at {r} - {s}
    KPoly evaluate(const QCusp& r, const QCusp& s) const;
    // the same symbol over Q(g) = K with g as the power-basis generator
    EigenSymbol regenerated(const KElem& g, const std::string& description, long check_bound = 13) const;

private:
    std::shared_ptr<const ModSymSpace> space_;
    NumberFieldRef field_;
    int sign_;
    std::vector<la::Vec> functional_;  // power-basis components
    KElem zeta_;
    std::string generator_;
    std::vector<KElem> values_;
    std::map<long, KElem> eigenvalues_;

    KElem apply(const la::Mat& T, int row) const;
    KElem row_value(int row) const;
    // Manin symbols (polynomial substitution matrix, bottom row) summing to P{0, x}
    std::vector<Mat2> path_from_zero(const QCusp& x) const;
};

// Newform-like eigensystems (multiplicity one in the sign space), sorted by
// (degree, minimal polynomial of the generator).
std::vector<EigenSymbol> eigen_decompose(std::shared_ptr<const ModSymSpace> space, int sign,
                                         const DecomposeOptions& opts = {});

// A copy whose field generator has a certifiable factorization over Q_p (the
// original when it already has one). Throws PrecisionExhausted otherwise.
EigenSymbol adapt_to_prime(const EigenSymbol& symbol, const PrimeContext& ctx);

// Scaling at a prime above p making all generator values integral with one unit.
class NormalizedSymbol {
public:
    NormalizedSymbol(const EigenSymbol& symbol, EmbeddedNumberField emb);

    const EigenSymbol& symbol() const { return *symbol_; }
    const EmbeddedNumberField& embedding() const { return emb_; }
    FieldRef local() const { return emb_.local; }
    // ord_varpi of the unnormalized norm; the symbol was divided by varpi^shift
    long scaling_exponent() const { return shift_; }
    LocalElem embed(const KElem& x) const;  // scaled
    LocalElem embed_unscaled(const KElem& x) const { return emb_.embed(x); }

private:
    const EigenSymbol* symbol_;
    EmbeddedNumberField emb_;
    long shift_ = 0;
    LocalElem scale_;
};

// divisors {g inf} - {g 0} for lifts g of P1(Z/M)
std::vector<std::pair<QCusp, QCusp>> manin_test_divisors(long M);

// largest r with all test values in Fil^r, and the refined index t
struct Filtration {
    long r;
    long t;
};
Filtration filtration_level(const NormalizedSymbol& phi, long p);
long mu_min(const NormalizedSymbol& phi, long p);

// values varpi^(-shift) P(0,1) mod varpi on the level-Np test set
struct ReducedSymbol {
    fp::Poly residual;  // residue field modulus
    long p;
    std::vector<fp::Poly> values;
};
ReducedSymbol phi_k_reduce(const NormalizedSymbol& phi, long shift = 0);
// scalar c with f = c g on the test set; nullopt when none exists
std::optional<fp::Poly> compare_phi(const ReducedSymbol& f, const ReducedSymbol& g);
// (X^p Y - X Y^p) P over F_p; P has degree k - p - 3
fp::Poly theta_k_lift(const fp::Poly& P, long p);

}  // namespace imt
