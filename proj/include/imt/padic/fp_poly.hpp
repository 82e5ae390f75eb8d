#pragma once

// Dense polynomials over a prime field F_p with p < 2^31, coefficients low to high.

#include <cstdint>
#include <utility>
#include <vector>

namespace imt::fp {

using Coeff = std::int64_t;
using Poly = std::vector<Coeff>;

Coeff reduce(Coeff a, Coeff p);
Coeff inv(Coeff a, Coeff p);
Coeff pow(Coeff a, std::uint64_t e, Coeff p);

void trim(Poly& f);
int degree(const Poly& f);
bool is_zero(const Poly& f);

Poly add(const Poly& a, const Poly& b, Coeff p);
Poly sub(const Poly& a, const Poly& b, Coeff p);
Poly mul(const Poly& a, const Poly& b, Coeff p);
Poly scale(const Poly& a, Coeff s, Coeff p);
// quotient and remainder; b must be nonzero
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, Coeff p);
Poly rem(const Poly& a, const Poly& b, Coeff p);
Poly monic(const Poly& a, Coeff p);
Poly gcd(const Poly& a, const Poly& b, Coeff p);
// returns (g, s, t) with s*a + t*b = g monic
struct ExtGcd {
    Poly g, s, t;
};
ExtGcd ext_gcd(const Poly& a, const Poly& b, Coeff p);
Poly derivative(const Poly& a, Coeff p);
Poly powmod(const Poly& base, std::uint64_t e, const Poly& modulus, Coeff p);
Coeff eval(const Poly& a, Coeff x, Coeff p);

struct Factor {
    Poly poly;  // monic irreducible
    int mult;
};

// Full factorization of a nonzero polynomial into monic irreducibles (leading
// coefficient dropped). Output is sorted by (degree, coefficients low to high).
std::vector<Factor> factor(const Poly& f, Coeff p);

bool less(const Poly& a, const Poly& b);

}  // namespace imt::fp
