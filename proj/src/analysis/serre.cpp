#include "imt/analysis/serre.hpp"

#include <algorithm>

#include "imt/error.hpp"

namespace imt {

long s_of(long p, long m) {
    long r = (m - 1) % (p - 1);
    if (r <= 0) r += p - 1;
    return r;
}

bool inertia_equivalent(long p, long t1, long t2) {
    const long q = p * p - 1;
    auto red = [q](long t) { return ((t % q) + q) % q; };
    return red(t1) == red(t2) || red(t1) == red(p * t2);
}

SerreCombinatorics serre_combinatorics(long p, long k) {
    if (k < 2 || k >= p * p + 1) throw OutOfRange("weight outside [2, p^2]");
    SerreCombinatorics out;
    out.p = p;
    out.k = k;
    out.s = s_of(p, k);
    out.k_prime = (k - 2) % (p - 1);
    const long top = (k - 2) / (p + 1);
    const long half = out.k_prime / 2;
    if (top <= half)
        out.delta = 0;
    else if (top <= half + (p - 1) / 2)
        out.delta = 1;
    else
        out.delta = 2;
    if (k > p + 2) {
        const long skip1 = (out.k_prime + 2) / 2, skip2 = (p + out.k_prime + 3) / 2;
        for (long j = 1; j <= top + out.delta; ++j)
            if (j != skip1 && j != skip2) out.theta_types.push_back((out.s + j * (p - 1)) % (p * p - 1));
        std::sort(out.theta_types.begin(), out.theta_types.end());
        out.theta_types.erase(std::unique(out.theta_types.begin(), out.theta_types.end()), out.theta_types.end());
    }
    out.weight_bound_ok = top + out.delta < out.s;
    out.s_in_theta_types = std::any_of(out.theta_types.begin(), out.theta_types.end(),
                                       [&](long t) { return inertia_equivalent(p, t, out.s); });
    return out;
}

std::vector<long> theta_types_recursive(long p, long k) {
    std::vector<long> out;
    for (long i = 1; i <= (k - 2) / (p + 1); ++i) out.push_back(s_of(p, k - i * (p + 1)) + i * (p + 1));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool theorem_b_applicable(long p, long k_f, long k_g) {
    if (!(2 < k_g && k_g < p + 1)) return false;
    // (k_g - 1 - δ)(p+1) <= (p-1)(p+1), so larger weights fail regardless of δ
    if (k_f >= p * p + 1) return false;
    const long delta = serre_combinatorics(p, k_f).delta;
    return k_f < (k_g - 1 - delta) * (p + 1);
}

bool theorem_c_applicable(const std::optional<mpq_class>& slope, long k_g) {
    return slope.has_value() && *slope < k_g - 2;
}

}  // namespace imt
