#pragma once

// Inertia types of forms in the image of the theta operator, and the weight and
// slope conditions for comparing congruent forms.

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace imt {

struct SerreCombinatorics {
    long p = 0, k = 0;
    long s = 0;        // s(k) in [1, p-1] with k - 1 ≡ s(k) mod p-1
    long k_prime = 0;  // (k - 2) mod (p - 1)
    long delta = 0;
    std::vector<long> theta_types;  // s(k) + j(p-1) mod p^2-1 over the admissible j, increasing
    bool weight_bound_ok = false;   // floor((k-2)/(p+1)) + δ < s(k)
    bool s_in_theta_types = false;  // s(k) ~ some element, with t ~ pt mod p^2 - 1
};

// 2 <= k < p^2 + 1, otherwise OutOfRange
SerreCombinatorics serre_combinatorics(long p, long k);
// the same set from the recursion s(k - i(p+1)) + i(p+1), 1 <= i <= floor((k-2)/(p+1))
std::vector<long> theta_types_recursive(long p, long k);
// t1 ~ t2 in (Z/(p^2-1)) / (t ~ pt)
bool inertia_equivalent(long p, long t1, long t2);
long s_of(long p, long m);

// weight condition for congruent forms: 2 < k_g < p+1 and k_f < (k_g - 1 - δ(k_f))(p+1)
bool theorem_b_applicable(long p, long k_f, long k_g);
// slope condition: ord_p(a_p(f)) < k_g - 2; nullopt slope means a_p = 0
bool theorem_c_applicable(const std::optional<mpq_class>& slope, long k_g);

}  // namespace imt
