#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imt/padic/fp_poly.hpp"
#include "imt/padic/zpoly.hpp"

namespace imt {

struct PrimeContext {
    long p = 5;
    int M = 30;

    PrimeContext() = default;
    PrimeContext(long prime, int precision);
    mpz_class modulus() const;      // p^M
    mpz_class power(int e) const;   // p^e
};

class LocalField;
using FieldRef = std::shared_ptr<const LocalField>;

// Q_p[y]/(g) for a certified irreducible factor g. The ring Z_p[y]/(g) may be a
// proper suborder of the integers; elements carry an explicit power of p.
class LocalField {
public:
    // the trivial extension Q_p itself
    static FieldRef rational(const PrimeContext& ctx);

    const PrimeContext& ctx() const { return ctx_; }
    const zp::Poly& defining() const { return g_; }
    int degree() const { return static_cast<int>(g_.size()) - 1; }
    int ram() const { return e_; }
    int res_degree() const { return f_; }
    const fp::Poly& residual() const { return hbar_; }
    const zp::Poly& residual_lift() const { return hlift_; }
    // ord_varpi of hlift(y)
    int residual_lift_val() const { return v0_; }
    // Z_p[y] is the full ring of integers
    bool monogenic() const { return e_ == 1 || v0_ == 1; }
    bool same(const LocalField& other) const;
    std::string describe() const;

    struct Certified {
        zp::Poly g;
        fp::Poly hbar;
        zp::Poly hlift;  // empty: the plain lift of hbar
        int e;
        int v0;
    };
    explicit LocalField(const PrimeContext& ctx, Certified data);

private:
    PrimeContext ctx_;
    zp::Poly g_;
    zp::Poly hlift_;
    fp::Poly hbar_;
    int e_ = 1;
    int f_ = 1;
    int v0_ = 1;
};

// An element p^shift * sum c_i y^i with the c_i known modulo p^rel and, unless
// the element is an exact zero, not all divisible by p.
class LocalElem {
public:
    LocalElem() = default;
    static LocalElem zero(FieldRef field);
    static LocalElem one(FieldRef field);
    static LocalElem from_int(FieldRef field, const mpz_class& n);
    static LocalElem from_rational(FieldRef field, const mpq_class& q);
    static LocalElem from_coeffs(FieldRef field, std::vector<mpz_class> coeffs, int shift = 0);
    // value of an integer polynomial at the generator y
    static LocalElem from_poly(FieldRef field, const std::vector<mpq_class>& coeffs);
    static LocalElem generator(FieldRef field);
    static LocalElem uniformizer(FieldRef field);

    const FieldRef& field() const { return field_; }
    bool exact_zero() const { return exact_zero_; }
    // all tracked digits vanish
    bool is_zero() const;
    int shift() const { return shift_; }
    int rel_prec() const { return rel_; }
    int abs_prec() const;  // in p-units
    const std::vector<mpz_class>& digits() const { return c_; }

    // ord_varpi; nullopt means exact zero; throws PrecisionExhausted when undetermined
    std::optional<long> valuation() const;
    // a certified lower bound for ord_varpi (exact when known)
    long valuation_lower_bound() const;
    // ord_varpi as reported by the norm: (e / deg g) * ord_p N(x); slow, used as a check
    std::optional<long> valuation_by_norm() const;
    mpq_class ord_p() const;

    LocalElem operator-() const;
    LocalElem& operator+=(const LocalElem& o);
    LocalElem& operator-=(const LocalElem& o);
    LocalElem& operator*=(const LocalElem& o);
    friend LocalElem operator+(LocalElem a, const LocalElem& b) { return a += b; }
    friend LocalElem operator-(LocalElem a, const LocalElem& b) { return a -= b; }
    friend LocalElem operator*(LocalElem a, const LocalElem& b) { return a *= b; }
    LocalElem times_int(const mpz_class& n) const;
    LocalElem times_p_power(int e) const;
    LocalElem inverse() const;
    LocalElem pow(long e) const;
    // element of the residue field F_p[y]/(hbar) (coefficients of a polynomial of degree < f)
    fp::Poly residue() const;
    // coefficients as exact rationals (p^shift * c_i)
    std::vector<mpq_class> to_rationals() const;
    // reduce the relative precision
    LocalElem with_rel_prec(int rel) const;
    // re-express an element of Q_p inside a larger field
    LocalElem lift_to(FieldRef field) const;
    // approximate equality: difference has valuation at least bound (ord_varpi units)
    bool congruent(const LocalElem& o, long bound) const;
    std::string str() const;

private:
    void normalize();
    FieldRef field_;
    std::vector<mpz_class> c_;
    int shift_ = 0;
    int rel_ = 0;
    bool exact_zero_ = true;
};

// One irreducible factor of m over Q_p. The field may use a generator other
// than the root of m; root is the image of that root.
struct LocalFactor {
    FieldRef field;
    LocalElem root;
};

// Factorization of m over Q_p, sorted by (degree, residual factor, ramification).
// Throws PrecisionExhausted when a block cannot be resolved at the working precision.
std::vector<LocalFactor> local_factors(const zp::Poly& m, const PrimeContext& ctx);
// the fields of local_factors
std::vector<FieldRef> hensel_factor(const zp::Poly& m, const PrimeContext& ctx);

struct EmbeddedNumberField {
    zp::Poly minpoly;
    int prime_index = 1;  // 1-based
    FieldRef local;
    LocalElem embed_root;

    static EmbeddedNumberField make(const zp::Poly& minpoly, int prime_index, const PrimeContext& ctx);
    // embed sum q_i x^i
    LocalElem embed(const std::vector<mpq_class>& coeffs) const;
};

// omega(a) as an integer in [0, p^M)
mpz_class teichmuller_int(long a, const PrimeContext& ctx);
LocalElem teichmuller(long a, const PrimeContext& ctx);

struct HeckeRoots {
    FieldRef field;  // field containing both roots
    LocalElem alpha;
    LocalElem beta;
    bool extended = false;  // roots generate a quadratic extension
};

// roots of X^2 - a_p X + eps_p p^(k-1)
HeckeRoots hecke_roots(const LocalElem& a_p, const LocalElem& eps_p, int k);

}  // namespace imt
