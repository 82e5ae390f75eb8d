#pragma once

// Mazur-Tate elements of an eigen-symbol and their isotypic projections.

#include <string>
#include <vector>

#include "imt/iwasawa/group_ring.hpp"
#include "imt/modsym/eigen.hpp"

namespace imt {

// ϑ_{n,j}(a) = λ((p^n x + a y)^j y^(k-2-j) {-a/p^n, ∞}) for units a mod p^n
struct ThetaRaw {
    long p;
    int n;
    std::vector<long> residues;           // units a in [1, p^n)
    std::vector<std::vector<KElem>> values;  // values[idx][slot] for the requested j
    std::vector<int> js;
};

// components js (all j when empty)
ThetaRaw theta_raw(const EigenSymbol& phi, long p, int n, std::vector<int> js = {});

struct ThetaElement {
    std::string label;
    long p;
    int n, j, i;
    int sign;
    GroupRingPoly body;
    bool integral;
};

// discrete logarithm of a ω(a)^(-1) to the base 1 + p, modulo p^n
std::vector<long> gamma_logs(long p, int n, const std::vector<long>& residues);

// Θ_{n,j}(f, ω^i) from ϑ_{n+1,j}; raw must be at level n + 1 and contain j
ThetaElement project_theta(const ThetaRaw& raw, int j, int i, const NormalizedSymbol& phi,
                           bool check_sign = true);
ThetaElement theta_element(const NormalizedSymbol& phi, int n, int j, int i, bool check_sign = true);

struct StabilizedTheta {
    ThetaElement base;
    LocalElem upsilon;
    GroupRingPoly body;
};

// Υ^{-(n+1)} Θ_n - ε(p) p^(k-2) Υ^{-(n+2)} ν Θ_{n-1}
StabilizedTheta stabilize(const ThetaElement& theta_n, const ThetaElement& theta_prev, const LocalElem& upsilon,
                          const LocalElem& eps_p, int k);

}  // namespace imt
