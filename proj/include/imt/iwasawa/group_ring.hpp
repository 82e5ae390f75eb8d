#pragma once

#include <optional>
#include <vector>

#include "imt/padic/local.hpp"

namespace imt {

// polynomial over a local field, coefficients low to high
using LPoly = std::vector<LocalElem>;

struct IwasawaInvariants {
    std::optional<long> mu;      // ord_varpi units
    std::optional<long> lambda;
    bool is_zero() const { return !mu.has_value(); }
};

// Element of K[G_n] written as a polynomial of degree < p^n in X = gamma - 1.
// The represented value is p^(-denom_exp) * sum coeffs[i] X^i.
class GroupRingPoly {
public:
    GroupRingPoly() = default;
    GroupRingPoly(FieldRef field, int n);
    // sum a_m (1+X)^m over m < p^n
    static GroupRingPoly from_group_basis(FieldRef field, int n, const std::vector<LocalElem>& a);
    // reduction of an arbitrary polynomial modulo omega_n
    static GroupRingPoly from_poly(FieldRef field, int n, const LPoly& f);

    const FieldRef& field() const { return field_; }
    long p() const { return field_->ctx().p; }
    int level() const { return n_; }
    long size() const { return static_cast<long>(c_.size()); }
    const std::vector<LocalElem>& coeffs() const { return c_; }
    LocalElem& operator[](long i) { return c_[i]; }
    const LocalElem& operator[](long i) const { return c_[i]; }
    int denom_exp() const { return denom_exp_; }
    void set_denom_exp(int t) { denom_exp_ = t; }
    // fold denom_exp into the coefficients
    GroupRingPoly absorbed() const;

    GroupRingPoly& operator+=(const GroupRingPoly& o);
    GroupRingPoly& operator-=(const GroupRingPoly& o);
    friend GroupRingPoly operator+(GroupRingPoly a, const GroupRingPoly& b) { return a += b; }
    friend GroupRingPoly operator-(GroupRingPoly a, const GroupRingPoly& b) { return a -= b; }
    friend GroupRingPoly operator*(const GroupRingPoly& a, const GroupRingPoly& b);
    GroupRingPoly scaled(const LocalElem& s) const;
    GroupRingPoly negated() const;

    // coefficients a_m in the basis (1+X)^m
    std::vector<LocalElem> group_basis() const;
    // projection pi^n_m: reduction modulo omega_m
    GroupRingPoly project_to(int m) const;
    // norm (corestriction) nu^m_n for m > n: sum over preimages
    GroupRingPoly norm_to(int m) const;
    // substitute X -> (1+X)^c - 1 (generator gamma -> gamma^c)
    GroupRingPoly change_generator(long c) const;
    // substitute X -> u^i (1+X) - 1 on the representative of degree < p^n
    GroupRingPoly tw(long i, const LocalElem& u) const;
    LPoly as_poly() const;

private:
    FieldRef field_;
    int n_ = 0;
    std::vector<LocalElem> c_;
    int denom_exp_ = 0;
};

IwasawaInvariants mu_lambda(const LPoly& f, int denom_exp = 0);
IwasawaInvariants mu_lambda(const GroupRingPoly& F);

// integer polynomials in X
zp::Poly omega_poly(long p, int n);  // (1+X)^(p^n) - 1
zp::Poly phi_poly(long p, int n);    // cyclotomic polynomial of order p^n at 1+X; X for n = 0

// substitute X -> u^i (1+X) - 1 with u = 1 + p, coefficients modulo p^M
zp::Poly tw_int(const zp::Poly& f, long i, const PrimeContext& ctx);

struct PhiProducts {
    zp::Poly all;    // prod_{j<h} Tw^{-j} Phi_n
    zp::Poly plus;   // product over even m in [2, n]
    zp::Poly minus;  // product over odd m in [1, n]
};
PhiProducts phi_products(const PrimeContext& ctx, int n, int h);
// prod_{j<h} Tw^{-j} omega_n modulo p^M
zp::Poly omega_product(const PrimeContext& ctx, int n, int h);

long q_n(long p, int n);

struct ZetaValuation {
    mpq_class direct;                     // ord_p of F(zeta_{p^n} - 1)
    std::optional<mpq_class> closed_form; // mu ord_p(varpi) + lambda / phi(p^n)
    bool hypothesis_holds = false;        // lambda < phi(p^n) ord_p(varpi)
};
// Direct value is ord_p of the resultant with the minimal polynomial of zeta - 1,
// divided by phi(p^n); this is the value itself whenever that polynomial stays
// irreducible over the coefficient field.
ZetaValuation eval_val_at_zeta(const GroupRingPoly& F, int n);

// polynomial helpers over a local field
LPoly lpoly_from_int(const FieldRef& field, const zp::Poly& f);
LPoly lpoly_mul(const LPoly& a, const LPoly& b);
LPoly lpoly_rem_monic(const LPoly& a, const zp::Poly& b);
void lpoly_trim(LPoly& f);
long binomial_mod(long n, long k, long p);

}  // namespace imt
