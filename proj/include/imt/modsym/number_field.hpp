#pragma once

// Absolute number fields Q[x]/(m(x)) for a monic irreducible integer m.
// Elements are coefficient vectors of length deg m in the power basis.

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "imt/padic/zpoly.hpp"

namespace imt {

using KElem = std::vector<mpq_class>;

class NumberField {
public:
    explicit NumberField(zp::Poly minpoly);

    const zp::Poly& minpoly() const { return minpoly_; }
    int degree() const { return deg_; }

    KElem zero() const { return KElem(deg_, 0); }
    KElem one() const { return from_rational(1); }
    KElem from_rational(const mpq_class& q) const;
    KElem gen() const;
    // reduce an arbitrary polynomial in the generator
    KElem reduce(std::vector<mpq_class> poly) const;

    KElem add(const KElem& a, const KElem& b) const;
    KElem sub(const KElem& a, const KElem& b) const;
    KElem neg(const KElem& a) const;
    KElem mul(const KElem& a, const KElem& b) const;
    KElem scale(const KElem& a, const mpq_class& q) const;
    KElem inv(const KElem& a) const;
    KElem pow(const KElem& a, long e) const;
    static bool is_zero(const KElem& a);
    bool is_rational(const KElem& a) const;
    mpq_class trace(const KElem& a) const;
    std::string str(const KElem& a) const;

private:
    zp::Poly minpoly_;
    int deg_;
    std::vector<mpq_class> power_traces_;
};

using NumberFieldRef = std::shared_ptr<const NumberField>;

// cyclotomic polynomial of order m
zp::Poly cyclotomic(long m);

}  // namespace imt
