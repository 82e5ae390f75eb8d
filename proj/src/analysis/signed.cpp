#include "imt/analysis/signed.hpp"

#include <algorithm>
#include <map>

#include "imt/error.hpp"

namespace imt {

const char* to_string(LambdaPattern pattern) {
    switch (pattern) {
        case LambdaPattern::Stable: return "stable";
        case LambdaPattern::WeightPPlusOne: return "weight p+1";
        case LambdaPattern::Corestriction: return "corestriction";
        case LambdaPattern::None: return "non-(FL) pattern";
    }
    return "?";
}

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

std::vector<InvariantPoint> canonical(std::vector<InvariantPoint> points) {
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
    for (size_t t = 1; t < points.size(); ++t)
        if (points[t].n == points[t - 1].n && points[t] != points[t - 1])
            throw SchemaMismatch("conflicting invariants at n = " + std::to_string(points[t].n));
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

// constant value of λ(Θ_n) - (k-1)q_n over the given parity, if any
std::optional<long> parity_constant(const std::vector<InvariantPoint>& pts, int n0, int parity, int k, long p) {
    std::optional<long> value;
    for (const auto& pt : pts) {
        if (pt.n < n0 || pt.n % 2 != parity) continue;
        if (!pt.lambda) return std::nullopt;
        const long d = *pt.lambda - (k - 1) * q_n(p, pt.n);
        if (value && *value != d) return std::nullopt;
        value = d;
    }
    return value;
}

bool corestriction_matches(const std::vector<InvariantPoint>& pts, std::span<const InvariantPoint> companion,
                           long p, int& checked) {
    std::map<int, std::optional<long>> g;
    for (const auto& pt : companion) g[pt.n] = pt.lambda;
    checked = 0;
    for (const auto& pt : pts) {
        if (pt.n < 1) continue;
        auto it = g.find(pt.n - 1);
        if (it == g.end()) continue;
        if (!pt.lambda || !it->second) return false;
        if (*pt.lambda != *it->second + ipow(p, pt.n) - ipow(p, pt.n - 1)) return false;
        ++checked;
    }
    return checked >= 2;
}

fp::Poly residue_mul(const fp::Poly& a, const fp::Poly& b, const fp::Poly& mod, long p) {
    return fp::rem(fp::mul(a, b, p), mod, p);
}

std::optional<fp::Poly> residue_inverse(const fp::Poly& a, const fp::Poly& mod, long p) {
    if (fp::is_zero(a)) return std::nullopt;
    auto eg = fp::ext_gcd(a, mod, p);
    if (fp::degree(eg.g) != 0) return std::nullopt;
    return fp::rem(eg.s, mod, p);
}

}  // namespace

SignedReport extract_signed(std::vector<InvariantPoint> points, int k, long p,
                            std::span<const InvariantPoint> companion) {
    SignedReport out;
    out.p = p;
    out.k = k;
    out.points = canonical(std::move(points));
    int counts[2] = {0, 0};
    for (const auto& pt : out.points) ++counts[pt.n % 2];
    if (counts[0] < 2 || counts[1] < 2) throw InsufficientData("need two points of each parity");
    out.n_max = out.points.back().n;

    for (int n0 = out.points.front().n; n0 + 2 <= out.n_max; ++n0) {
        auto even = parity_constant(out.points, n0, 0, k, p);
        auto odd = parity_constant(out.points, n0, 1, k, p);
        if (!even || !odd) continue;
        out.n0 = n0;
        out.lambda_sharp = even;
        out.lambda_flat = odd;
        out.pattern = k == p + 1 ? LambdaPattern::WeightPPlusOne : LambdaPattern::Stable;
        break;
    }

    if (out.pattern == LambdaPattern::WeightPPlusOne && !companion.empty()) {
        try {
            auto g = extract_signed({companion.begin(), companion.end()}, 2, p);
            const bool shift_ok = g.lambda_flat && g.lambda_sharp && *out.lambda_flat == p - 1 + *g.lambda_flat &&
                                  *out.lambda_sharp == *g.lambda_sharp;
            out.note = shift_ok ? "λ♭ = p-1+λ♭(g), λ♯ = λ♯(g)" : "companion shift does not match";
        } catch (const InsufficientData&) {
            out.note = "companion too short";
        }
    }

    if (out.pattern == LambdaPattern::None) {
        int checked = 0;
        if (!companion.empty() && corestriction_matches(out.points, companion, p, checked)) {
            out.pattern = LambdaPattern::Corestriction;
            out.n0 = 1;
            out.note = "λ(Θ_n) = λ(Θ_{n-1}(g)) + p^n - p^(n-1) at " + std::to_string(checked) + " levels";
        } else {
            out.n0 = out.n_max;
            out.note = "λ(Θ_n) - (k-1)q_n not eventually constant per parity";
        }
    }

    std::optional<long> mu;
    bool mu_ok = true;
    for (const auto& pt : out.points) {
        if (pt.n < out.n0) continue;
        if (!pt.mu || (mu && *mu != *pt.mu)) {
            mu_ok = false;
            break;
        }
        mu = pt.mu;
    }
    if (mu_ok && mu) {
        out.mu = mu;
        out.mu_hypothesis = out.pattern != LambdaPattern::None;
    }
    return out;
}

LowerBoundVerdict check_lower_bound(const SignedReport& report, int k) {
    LowerBoundVerdict out;
    if (report.pattern == LambdaPattern::None) return out;
    for (const auto& pt : report.points) {
        if (pt.n % 2 == 0 || pt.n < report.n0 || !pt.lambda) continue;
        LowerBoundEntry e;
        e.n = pt.n;
        e.lambda = *pt.lambda;
        e.bound = (k - 1) * q_n(report.p, pt.n) + k - 2;
        e.ok = e.lambda >= e.bound;
        e.tight = e.lambda == e.bound;
        out.entries.push_back(e);
    }
    out.ok = !out.entries.empty() &&
             std::all_of(out.entries.begin(), out.entries.end(), [](const auto& e) { return e.ok; });
    out.tight = report.lambda_flat && *report.lambda_flat == k - 2;
    return out;
}

BKValuation bk_valuation(const SignedReport& report, int n, long ram, const GroupRingPoly* theta_n) {
    const auto& star = n % 2 == 1 ? report.lambda_flat : report.lambda_sharp;
    if (!star || !report.mu) throw InsufficientData("no stable signed invariant for this parity");
    const long p = report.p;
    const long k = report.k;
    const mpq_class ord_varpi(1, ram);
    const long phi = n == 0 ? 1 : ipow(p, n) - ipow(p, n - 1);
    BKValuation out;
    out.value = *report.mu * ord_varpi + mpq_class((k - 1) * q_n(p, n) + *star, phi);
    out.value.canonicalize();
    out.hypothesis_ok = ord_varpi > mpq_class(p * (k - 1), p * p - 1);
    if (theta_n) {
        if (n == 0) {
            // no root of unity to evaluate at: the value is the constant term
            auto c = theta_n->absorbed()[0];
            if (!c.is_zero()) out.direct = c.ord_p();
        } else {
            out.direct = eval_val_at_zeta(*theta_n, n).direct;
        }
        out.agrees = out.direct && *out.direct == out.value;
    }
    return out;
}

CorestrictionCheck corestriction_congruence(const GroupRingPoly& theta_f_n, const GroupRingPoly& theta_g_prev) {
    CorestrictionCheck out;
    out.n = theta_f_n.level();
    const long p = theta_f_n.p();
    const auto& Kf = *theta_f_n.field();
    const auto& Kg = *theta_g_prev.field();
    if (theta_g_prev.level() + 1 != out.n) throw OutOfRange("levels must be n and n - 1");
    // two prime fields are the same whatever root the residual polynomial records
    const bool prime_fields = Kf.res_degree() == 1 && Kg.res_degree() == 1;
    if (!prime_fields && Kf.residual() != Kg.residual()) {
        out.failure = "residue fields differ";
        return out;
    }
    const fp::Poly mod = prime_fields ? fp::Poly{0, 1} : Kf.residual();

    auto F = theta_f_n.absorbed();
    auto inv = mu_lambda(F);
    out.mu_f = inv.mu;
    if (!inv.mu) {
        out.failure = "Θ_n(f) is zero";
        return out;
    }
    const auto unscale = LocalElem::uniformizer(theta_f_n.field()).pow(*inv.mu).inverse();
    auto G = theta_g_prev.absorbed().norm_to(out.n);

    std::vector<fp::Poly> fr, gr;
    for (long t = 0; t < F.size(); ++t) fr.push_back((F[t] * unscale).residue());
    for (long t = 0; t < G.size(); ++t) {
        if (G[t].valuation_lower_bound() < 0) {
            out.failure = "ν Θ_{n-1}(g) is not integral";
            return out;
        }
        gr.push_back(G[t].residue());
    }
    fr.resize(std::max(fr.size(), gr.size()));
    gr.resize(fr.size());

    std::optional<fp::Poly> c;
    for (size_t t = 0; t < fr.size() && !c; ++t) {
        if (fp::is_zero(gr[t])) continue;
        c = residue_mul(fr[t], *residue_inverse(gr[t], mod, p), mod, p);
    }
    if (!c || fp::is_zero(*c)) {
        out.failure = "ν Θ_{n-1}(g) vanishes mod ϖ";
        return out;
    }
    for (size_t t = 0; t < fr.size(); ++t) {
        auto lhs = fr[t];
        auto rhs = residue_mul(*c, gr[t], mod, p);
        fp::trim(lhs);
        fp::trim(rhs);
        if (lhs != rhs) {
            out.failure = "coefficient of X^" + std::to_string(t) + " differs";
            return out;
        }
    }
    out.congruent = true;
    out.scalar = *c;
    return out;
}

PairVerdict compare_pair(const SignedReport& f, const SignedReport& g, const ReducedSymbol* f_sym,
                         const ReducedSymbol* g_sym, std::span<const ThetaPair> thetas) {
    PairVerdict out;
    std::map<int, std::optional<long>> glam;
    for (const auto& pt : g.points) glam[pt.n] = pt.lambda;
    out.lambdas_equal = true;
    for (const auto& pt : f.points) {
        auto it = glam.find(pt.n);
        if (it == glam.end()) continue;
        LambdaComparison c{pt.n, pt.lambda, it->second, pt.lambda == it->second};
        out.lambdas_equal = out.lambdas_equal && c.equal;
        out.lambdas.push_back(c);
    }
    out.lambdas_equal = out.lambdas_equal && !out.lambdas.empty();
    if (f_sym && g_sym && fp::degree(f_sym->residual) == fp::degree(g_sym->residual)) {
        out.symbols_compared = true;
        try {
            out.symbol_scalar = compare_phi(*f_sym, *g_sym);
        } catch (const HypothesisViolated&) {
            out.symbols_compared = false;
        }
    }
    for (const auto& tp : thetas) out.corestriction.push_back(corestriction_congruence(tp.f_n, tp.g_prev));
    return out;
}

}  // namespace imt
