#include "imt/logmatrix/log_matrix.hpp"

#include <algorithm>
#include <unordered_map>

#include "imt/error.hpp"

namespace imt {

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Z/p^M[Z/p^L]: the Mellin side modulo (1+π)^(p^L) - 1, basis T^c with T = 1 + π
class CyclicAlgebra {
public:
    CyclicAlgebra(const ModArith& R, long size) : R_(&R), c_(static_cast<size_t>(size), 0) {}

    long size() const { return static_cast<long>(c_.size()); }
    std::uint64_t& operator[](long i) { return c_[i]; }
    std::uint64_t operator[](long i) const { return c_[i]; }

    friend CyclicAlgebra operator+(CyclicAlgebra a, const CyclicAlgebra& b) {
        for (long i = 0; i < a.size(); ++i) a.c_[i] = a.R_->add(a.c_[i], b.c_[i]);
        return a;
    }
    friend CyclicAlgebra operator-(CyclicAlgebra a, const CyclicAlgebra& b) {
        for (long i = 0; i < a.size(); ++i) a.c_[i] = a.R_->sub(a.c_[i], b.c_[i]);
        return a;
    }
    friend CyclicAlgebra operator-(CyclicAlgebra a) {
        for (auto& x : a.c_) x = a.R_->neg(x);
        return a;
    }
    friend CyclicAlgebra operator*(const CyclicAlgebra& a, const CyclicAlgebra& b) {
        const long N = a.size();
        const unsigned __int128 m = a.R_->modulus();
        const unsigned __int128 cap = m * m * 8;
        std::vector<unsigned __int128> acc(static_cast<size_t>(N), 0);
        for (long i = 0; i < N; ++i) {
            if (a.c_[i] == 0) continue;
            const unsigned __int128 ai = a.c_[i];
            long t = i;
            for (long j = 0; j < N; ++j) {
                acc[t] += ai * b.c_[j];
                if (acc[t] >= cap) acc[t] %= m;
                if (++t == N) t = 0;
            }
        }
        CyclicAlgebra out(*a.R_, N);
        for (long i = 0; i < N; ++i) out.c_[i] = static_cast<std::uint64_t>(acc[i] % m);
        return out;
    }
    CyclicAlgebra scaled(std::uint64_t s) const {
        CyclicAlgebra out = *this;
        for (auto& x : out.c_) x = R_->mul(x, s);
        return out;
    }
    CyclicAlgebra pow(long e) const {
        CyclicAlgebra r(*R_, size());
        r.c_[0] = 1;
        CyclicAlgebra b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }
    // φ^s: T^c -> T^(p^s c)
    CyclicAlgebra frobenius(int s) const {
        const long step = ipow(R_->p(), s) % size();
        CyclicAlgebra out(*R_, size());
        for (long c = 0; c < size(); ++c)
            if (c_[c]) {
                long t = static_cast<long>((static_cast<__int128>(c) * step) % size());
                out.c_[t] = R_->add(out.c_[t], c_[c]);
            }
        return out;
    }
    // multiplication by T^s
    CyclicAlgebra shifted(long s) const {
        CyclicAlgebra out(*R_, size());
        for (long c = 0; c < size(); ++c) out.c_[(c + s) % size()] = c_[c];
        return out;
    }

private:
    const ModArith* R_;
    std::vector<std::uint64_t> c_;
};

int ceil_log(long p, long x) {
    int e = 0;
    long v = 1;
    while (v < x) {
        v *= p;
        ++e;
    }
    return e;
}

int ord_p(const mpz_class& x, long p, int cap) { return static_cast<int>(zp::ord_p(x, p, cap)); }

int min_ord(const zp::Poly& f, long p, int cap) {
    int v = cap;
    for (auto& c : f) v = std::min(v, ord_p(c, p, cap));
    return v;
}

// Σ a_m (1+X)^m as a polynomial in X
zp::Poly from_group_basis(const std::vector<mpz_class>& a, const mpz_class& mod) {
    zp::Poly r;
    for (size_t idx = a.size(); idx-- > 0;) {
        r.push_back(0);
        for (size_t e = r.size() - 1; e >= 1; --e) r[e] = (r[e] + r[e - 1]) % mod;
        r[0] = (r[0] + a[idx]) % mod;
    }
    zp::trim(r);
    return r;
}

std::vector<mpz_class> residues_of(const GroupRingPoly& F, const ModArith& R, int& prec) {
    GroupRingPoly G = F.absorbed();
    std::vector<mpz_class> out;
    for (auto& c : G.coeffs()) {
        out.push_back(mpz_class(to_residue(c, R)));
        if (!c.exact_zero()) prec = std::min(prec, c.abs_prec());
    }
    return out;
}

fp::Poly to_fp(const zp::Poly& f, long p) { return zp::to_fp(f, p); }

// the monic generator of the same ideal; the leading coefficient is a unit
zp::Poly monic(zp::Poly f, const mpz_class& mod) {
    zp::trim(f);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), f.back().get_mpz_t(), mod.get_mpz_t());
    return zp::scale(f, inv, mod);
}

// X-adic valuation in Z_p[X]/Φ_m with p = X^ram · unit
std::optional<long> xadic_val(const zp::Poly& f, long p, long ram, int cap) {
    long v = -1;
    for (size_t i = 0; i < f.size(); ++i) {
        int o = ord_p(f[i], p, cap);
        if (o >= cap) continue;
        long w = ram * o + static_cast<long>(i);
        if (v < 0 || w < v) v = w;
    }
    if (v < 0) return std::nullopt;
    return v;
}

fp::Poly series_inverse(const fp::Poly& u, long len, long p) {
    fp::Poly inv(static_cast<size_t>(len), 0);
    if (len == 0) return inv;
    const fp::Coeff i0 = fp::inv(u[0], p);
    inv[0] = i0;
    for (long i = 1; i < len; ++i) {
        fp::Coeff s = 0;
        for (long j = 1; j <= i && j < static_cast<long>(u.size()); ++j) s = (s + u[j] * inv[i - j]) % p;
        inv[i] = fp::reduce(-s * i0, p);
    }
    return inv;
}

}  // namespace

const char* to_string(SignedKind s) { return s == SignedKind::Sharp ? "sharp" : "flat"; }

std::uint64_t to_residue(const LocalElem& x, const ModArith& R) {
    if (x.exact_zero()) return 0;
    const auto& d = x.digits();
    mpz_class pr = R.p();
    mpz_class unit_mod;
    mpz_pow_ui(unit_mod.get_mpz_t(), pr.get_mpz_t(), static_cast<unsigned long>(std::max(x.rel_prec(), 0)));
    for (size_t i = 1; i < d.size(); ++i)
        if (d[i] % unit_mod != 0) throw HypothesisViolated("coefficient does not lie in Z_p");
    if (d.empty()) return 0;
    if (x.shift() < 0) {
        if (d[0] % unit_mod == 0) return 0;
        throw NonIntegral("coefficient with negative valuation");
    }
    mpz_class v;
    mpz_pow_ui(v.get_mpz_t(), pr.get_mpz_t(), static_cast<unsigned long>(x.shift()));
    return R.from(mpz_class(d[0] * v));
}

CMatrix c_matrix(const LocalElem& a_p, const LocalElem& eps_p, int k, int n, const PrimeContext& ctx, int level) {
    if (n < 1) throw OutOfRange("logarithmic matrices start at n = 1");
    if (k < 2) throw OutOfRange("weight must be at least 2");
    const long p = ctx.p;
    ModArith R(ctx);
    const int headroom = ceil_log(p, k - 1) + 1;
    if (level == 0) level = n + headroom;
    if (ipow(p, level - 1) < (k - 1) * ipow(p, n))
        throw TruncationTooSmall("level too small to resolve polynomials of degree (k-1)p^n");
    const long N = ipow(p, level);
    const std::uint64_t ap = to_residue(a_p, R), ep = to_residue(eps_p, R);

    // q = 1 + T + ... + T^(p-1) and δ^{-1} = (q - (T-1)^(p-1)) / p
    CyclicAlgebra q(R, N), w(R, N);
    {
        mpz_class b = 1;  // C(p-1, c)
        for (long c = 0; c < p; ++c) {
            q[c] = 1;
            mpz_class sgn = ((p - 1 - c) % 2) ? -1 : 1;
            mpz_class num = 1 - sgn * b;
            w[c] = R.from(mpz_class(num / p));
            b = b * (p - 1 - c) / (c + 1);
        }
    }
    CyclicAlgebra wk = w.pow(k - 1);
    CyclicAlgebra zero(R, N);
    TwoByTwo<CyclicAlgebra> pinv{wk.scaled(ap), wk, q.pow(k - 1).scaled(R.neg(ep)), zero};

    TwoByTwo<CyclicAlgebra> prod = pinv.map([](const CyclicAlgebra& x) { return x.frobenius(1); });
    for (int s = 2; s <= n; ++s)
        prod = pinv.map([s](const CyclicAlgebra& x) { return x.frobenius(s); }) * prod;

    // exponent c of u^c = T-class, u = 1 + p
    std::unordered_map<long, long> log_table;
    {
        long x = 1;
        for (long m = 0; m < N / p; ++m) {
            log_table[x] = m;
            x = static_cast<long>((static_cast<__int128>(x) * (1 + p)) % N);
        }
    }

    CMatrix C;
    C.p = p;
    C.n = n;
    C.k = k;
    C.level = level;
    C.M = ctx.M;
    C.a_p = ap;
    C.eps_p = ep;
    C.support_ok = true;
    const mpz_class mod = ctx.modulus();
    const zp::Poly omega_nk = monic(omega_product(ctx, n, k - 1), ctx.modulus());

    auto inverse_mellin = [&](const CyclicAlgebra& x) {
        CyclicAlgebra y = x.shifted(1);
        std::vector<mpz_class> a(static_cast<size_t>(N / p), 0);
        for (long c = 0; c < N; ++c) {
            if (y[c] == 0) continue;
            if (c % p != 1) {
                C.support_ok = false;
                continue;
            }
            a[log_table.at(c)] = y[c];
        }
        return from_group_basis(a, mod);
    };
    C.full = prod.map(inverse_mellin);
    C.entries = C.full.map([&](const zp::Poly& f) {
        auto r = zp::rem_monic(f, omega_nk, mod);
        zp::trim(r);
        return r;
    });

    // ambiguity: multiples of ω_{level-1} reduced modulo ω_{n,k-1}
    zp::Poly r = zp::rem_monic(omega_poly(p, level - 1), omega_nk, mod);
    int prec = ctx.M;
    const int deg = zp::degree(omega_nk);
    for (int i = 0; i < deg; ++i) {
        prec = std::min(prec, min_ord(r, p, ctx.M));
        r.insert(r.begin(), mpz_class(0));
        r = zp::rem_monic(r, omega_nk, mod);
    }
    C.reliable_prec = prec;
    return C;
}

CnfVerdict check_cnf_structure(const CMatrix& C) {
    const long p = C.p;
    if (C.a_p % p != 0) throw HypothesisViolated("a_p is a unit: the form is ordinary at p");
    if (C.reliable_prec < 1) throw PrecisionExhausted("logarithmic matrix not known modulo p");
    PrimeContext ctx(p, C.M);
    PhiProducts ph = phi_products(ctx, C.n, C.k - 1);
    const fp::Poly plus = to_fp(ph.plus, p), minus = to_fp(ph.minus, p);
    const bool odd = C.n % 2 == 1;
    const zp::Poly& zero_a = odd ? C.entries.a : C.entries.b;
    const zp::Poly& zero_b = odd ? C.entries.d : C.entries.c;
    const zp::Poly& with_plus = odd ? C.entries.b : C.entries.d;
    const zp::Poly& with_minus = odd ? C.entries.c : C.entries.a;

    CnfVerdict v;
    auto vanish = [&](const zp::Poly& f, const char* name) {
        fp::Poly r = to_fp(f, p);
        fp::trim(r);
        if (!fp::is_zero(r)) {
            v.failure = std::string("entry ") + name + " is nonzero mod p";
            return false;
        }
        return true;
    };
    auto cofactor = [&](const zp::Poly& f, const fp::Poly& phi, const char* name, fp::Poly& out) {
        fp::Poly g = to_fp(f, p);
        fp::trim(g);
        auto [qt, rem] = fp::divmod(g, phi, p);
        fp::trim(rem);
        if (!fp::is_zero(rem)) {
            v.failure = std::string("entry ") + name + " leaves a remainder of degree " +
                        std::to_string(fp::degree(rem));
            return false;
        }
        if (qt.empty() || fp::reduce(qt[0], p) == 0) {
            v.failure = std::string("cofactor of entry ") + name + " is not a unit";
            return false;
        }
        out = qt;
        return true;
    };
    const char* na = odd ? "(1,1)" : "(1,2)";
    const char* nb = odd ? "(2,2)" : "(2,1)";
    const char* np = odd ? "(1,2)" : "(2,2)";
    const char* nm = odd ? "(2,1)" : "(1,1)";
    v.ok = vanish(zero_a, na) && vanish(zero_b, nb) && cofactor(with_plus, plus, np, v.plus_cofactor) &&
           cofactor(with_minus, minus, nm, v.minus_cofactor);
    return v;
}

StabilizationResidual stabilization_residual(const CMatrix& Cn, const CMatrix& Cnext) {
    if (Cnext.n != Cn.n + 1 || Cnext.p != Cn.p || Cnext.k != Cn.k)
        throw OutOfRange("stabilization compares consecutive levels of one form");
    const long p = Cn.p;
    const int M = std::min(Cn.M, Cnext.M);
    PrimeContext ctx(p, M);
    const mpz_class mod = ctx.modulus();
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(Cn.k - 1));
    const mpz_class s = mpz_class(Cn.eps_p) * pk, ap = Cn.a_p;

    auto residual = [&](const zp::Poly& modulus, const TwoByTwo<zp::Poly>& lhs, const TwoByTwo<zp::Poly>& rhs) {
        auto red = [&](const zp::Poly& f) { return zp::rem_monic(f, modulus, mod); };
        TwoByTwo<zp::Poly> X = rhs.map(red);
        TwoByTwo<zp::Poly> AX{zp::scale(X.c, -1, mod), zp::scale(X.d, -1, mod),
                              zp::add(zp::scale(X.a, s, mod), zp::scale(X.c, ap, mod), mod),
                              zp::add(zp::scale(X.b, s, mod), zp::scale(X.d, ap, mod), mod)};
        TwoByTwo<zp::Poly> L = lhs.map([&](const zp::Poly& f) { return zp::scale(red(f), s, mod); });
        int v = M;
        const std::pair<const zp::Poly*, const zp::Poly*> pairs[] = {
            {&L.a, &AX.a}, {&L.b, &AX.b}, {&L.c, &AX.c}, {&L.d, &AX.d}};
        for (auto [x, y] : pairs) v = std::min(v, min_ord(zp::sub(*x, *y, mod), p, M));
        return v;
    };
    StabilizationResidual out;
    out.exact_val = residual(omega_poly(p, Cn.n), Cn.full, Cnext.full);
    out.full_val = residual(monic(omega_product(ctx, Cn.n, Cn.k - 1), mod), Cn.entries, Cnext.entries);
    out.expected_full = std::min(Cn.reliable_prec, Cnext.reliable_prec);
    return out;
}

SignedSolve solve_signed(const GroupRingPoly& Qn, const GroupRingPoly& Qprev, const CMatrix& C, int guard) {
    const long p = C.p;
    const int n = C.n;
    if (Qn.level() != n || Qprev.level() != n - 1) throw OutOfRange("theta levels do not match the matrix");
    if (Qn.p() != p) throw OutOfRange("prime mismatch");
    PrimeContext ctx(p, C.M);
    ModArith R(ctx);
    const mpz_class mod = ctx.modulus();

    SignedSolve out;
    out.n = n;
    out.kind = n % 2 ? SignedKind::Flat : SignedKind::Sharp;
    int prec = C.M;
    zp::Poly b1 = residues_of(Qn, R, prec);
    zp::Poly b2 = residues_of(Qprev.norm_to(n), R, prec);
    {
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(C.k - 2));
        b2 = zp::scale(b2, mpz_class(-mpz_class(C.eps_p) * pk), mod);
    }
    out.precision = prec;

    // mod-p shortcut: Q_n ≡ C_(1,2) L♭ (odd n) or C_(1,1) L♯ (even n)
    {
        auto inv = mu_lambda(Qn);
        if (inv.mu) {
            out.mu_shift = *inv.mu / Qn.field()->ram();
            mpz_class pm;
            mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(out.mu_shift));
            zp::Poly scaled;
            for (auto& c : b1) scaled.push_back(c / pm);
            fp::Poly qbar = zp::to_fp(scaled, p);
            fp::trim(qbar);
            PhiProducts ph = phi_products(ctx, n, C.k - 1);
            fp::Poly phi = zp::to_fp(n % 2 ? ph.plus : ph.minus, p);
            fp::trim(phi);
            fp::Poly entry = zp::to_fp(n % 2 ? C.entries.b : C.entries.a, p);
            fp::trim(entry);
            auto [qq, rq] = fp::divmod(qbar, phi, p);
            auto [uq, ur] = fp::divmod(entry, phi, p);
            fp::trim(rq);
            fp::trim(ur);
            const long d = fp::degree(phi);
            out.length = ipow(p, n) - d;
            out.divisible = fp::is_zero(rq) && fp::is_zero(ur) && !uq.empty() && fp::reduce(uq[0], p) != 0;
            if (out.divisible) {
                fp::Poly ui = series_inverse(uq, out.length, p);
                fp::Poly cof = fp::mul(qq, ui, p);
                cof.resize(static_cast<size_t>(std::max<long>(out.length, 0)), 0);
                fp::trim(cof);
                out.cofactor = cof;
                for (size_t i = 0; i < cof.size(); ++i)
                    if (fp::reduce(cof[i], p) != 0) {
                        out.lambda = static_cast<long>(i);
                        break;
                    }
            }
        }
    }

    // componentwise solvability over Z_p[ζ_(p^m)]
    out.consistent = true;
    const zp::Poly wn = omega_poly(p, n);
    auto red_n = [&](const zp::Poly& f) { return zp::rem_monic(f, wn, mod); };
    TwoByTwo<zp::Poly> Cn = C.full.map(red_n);
    for (int m = 0; m <= n; ++m) {
        const zp::Poly phim = phi_poly(p, m);
        const long ram = m == 0 ? 1 : ipow(p, m) - ipow(p, m - 1);
        auto red = [&](const zp::Poly& f) {
            auto r = zp::rem_monic(f, phim, mod);
            zp::trim(r);
            return r;
        };
        auto mul = [&](const zp::Poly& x, const zp::Poly& y) { return red(zp::mul(x, y, mod)); };
        TwoByTwo<zp::Poly> Cm = Cn.map(red);
        zp::Poly x1 = red(b1), x2 = red(b2);
        const int cap = prec - guard;
        ComponentCheck cc;
        cc.m = m;
        cc.ram = ram;
        cc.det_val = xadic_val(zp::sub(mul(Cm.a, Cm.d), mul(Cm.b, Cm.c), mod), p, ram, cap);
        if (!cc.det_val) {
            auto r1 = xadic_val(zp::sub(mul(Cm.a, x2), mul(Cm.c, x1), mod), p, ram, cap);
            auto r2 = xadic_val(zp::sub(mul(Cm.b, x2), mul(Cm.d, x1), mod), p, ram, cap);
            if (r1 || r2) {
                cc.consistent = false;
                cc.residual_val = std::min(r1.value_or(r2.value_or(0)), r2.value_or(r1.value_or(0)));
            }
        }
        out.consistent = out.consistent && cc.consistent;
        out.components.push_back(cc);
    }
    return out;
}

}  // namespace imt
