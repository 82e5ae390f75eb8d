#pragma once

// Dirichlet characters mod N with values in the roots of unity of order
// order(); a value is stored as an exponent e with ε(a) = ζ^e.

#include <string>
#include <vector>

namespace imt {

class DirichletCharacter {
public:
    static DirichletCharacter trivial(long N);
    // the Kronecker symbol (D/.) viewed mod N; requires it to be N-periodic
    static DirichletCharacter kronecker(long N, long D);
    // generator -> exponent of ζ_order; the generators must span (Z/N)^x
    static DirichletCharacter from_images(long N, long order, const std::vector<std::pair<long, long>>& images);
    // "trivial", "kronecker:D" or "order:m;g1=e1,g2=e2"
    static DirichletCharacter parse(long N, const std::string& spec);
    // one character per Galois orbit
    static std::vector<DirichletCharacter> orbit_representatives(long N);

    long modulus() const { return N_; }
    long order() const { return order_; }
    int exponent(long a) const;  // -1 when gcd(a, N) > 1
    bool is_trivial() const { return order_ == 1; }
    int parity() const;  // ε(-1) = ±1
    long conductor() const;
    DirichletCharacter power(long e) const;
    std::string spec() const { return spec_; }
    bool operator==(const DirichletCharacter& o) const { return N_ == o.N_ && exps_ == o.exps_; }

private:
    DirichletCharacter(long N, long order, std::vector<int> exps, std::string spec);
    long N_;
    long order_;
    std::vector<int> exps_;  // indexed by a mod N
    std::string spec_;
};

long gcd_long(long a, long b);
long mod_pos(long a, long m);
long euler_phi(long n);

}  // namespace imt
