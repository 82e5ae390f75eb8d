#pragma once

// Integer polynomials (coefficients low to high), optionally reduced modulo an integer.

#include <gmpxx.h>

#include <vector>

#include "imt/padic/fp_poly.hpp"

namespace imt::zp {

using Poly = std::vector<mpz_class>;

void trim(Poly& f);
int degree(const Poly& f);
Poly reduce(const Poly& f, const mpz_class& modulus);
Poly add(const Poly& a, const Poly& b, const mpz_class& modulus);
Poly sub(const Poly& a, const Poly& b, const mpz_class& modulus);
Poly mul(const Poly& a, const Poly& b, const mpz_class& modulus);
Poly scale(const Poly& a, const mpz_class& s, const mpz_class& modulus);
// division by a monic polynomial
std::pair<Poly, Poly> divmod_monic(const Poly& a, const Poly& b, const mpz_class& modulus);
Poly rem_monic(const Poly& a, const Poly& b, const mpz_class& modulus);
Poly compose_shift(const Poly& a, const mpz_class& r, const mpz_class& modulus);  // a(y + r)
mpz_class eval(const Poly& a, const mpz_class& x, const mpz_class& modulus);

fp::Poly to_fp(const Poly& a, long p);
Poly from_fp(const fp::Poly& a);

// Lift f = g*h mod p (g monic, g and h coprime mod p) to a factorization mod p^M.
// f must be monic of degree deg g + deg h.
void hensel_lift(const Poly& f, Poly& g, Poly& h, long p, int M);

// Lift pairwise coprime monic factors of a monic f mod p to mod p^M.
std::vector<Poly> hensel_lift_multi(const Poly& f, const std::vector<fp::Poly>& factors, long p, int M);

// p-adic valuation of an integer (returns cap for zero)
long ord_p(const mpz_class& x, long p, long cap);

}  // namespace imt::zp
