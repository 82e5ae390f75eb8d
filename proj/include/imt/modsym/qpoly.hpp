#pragma once

// Polynomials over Q (coefficients low to high) and factorization of monic
// integer polynomials over Q.

#include <gmpxx.h>

#include <vector>

#include "imt/padic/zpoly.hpp"

namespace imt::qp {

using Poly = std::vector<mpq_class>;

void trim(Poly& f);
int degree(const Poly& f);
Poly mul(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly monic(const Poly& a);
Poly gcd(const Poly& a, const Poly& b);
Poly derivative(const Poly& a);

Poly from_z(const zp::Poly& f);
// throws if f has a non-integral coefficient
zp::Poly to_z(const Poly& f);

struct Factor {
    zp::Poly poly;  // monic irreducible over Q
    int mult;
};

// Factor a monic polynomial with integer coefficients; result sorted by
// (degree, coefficients low to high).
std::vector<Factor> factor_monic(const zp::Poly& f);

}  // namespace imt::qp
