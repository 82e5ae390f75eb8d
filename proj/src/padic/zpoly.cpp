#include "imt/padic/zpoly.hpp"

#include <stdexcept>

namespace imt::zp {

namespace {
mpz_class modred(const mpz_class& x, const mpz_class& m) {
    if (m == 0) return x;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}
}  // namespace

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

Poly reduce(const Poly& f, const mpz_class& modulus) {
    Poly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = modred(f[i], modulus);
    trim(r);
    return r;
}

Poly add(const Poly& a, const Poly& b, const mpz_class& modulus) {
    Poly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        mpz_class s = 0;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        r[i] = modred(s, modulus);
    }
    trim(r);
    return r;
}

Poly sub(const Poly& a, const Poly& b, const mpz_class& modulus) {
    Poly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        mpz_class s = 0;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s -= b[i];
        r[i] = modred(s, modulus);
    }
    trim(r);
    return r;
}

Poly mul(const Poly& a, const Poly& b, const mpz_class& modulus) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    for (auto& c : r) c = modred(c, modulus);
    trim(r);
    return r;
}

Poly scale(const Poly& a, const mpz_class& s, const mpz_class& modulus) {
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = modred(a[i] * s, modulus);
    trim(r);
    return r;
}

std::pair<Poly, Poly> divmod_monic(const Poly& a, const Poly& b, const mpz_class& modulus) {
    int db = degree(b);
    if (db < 0 || b[db] != 1) throw std::domain_error("zp::divmod_monic needs a monic divisor");
    Poly r = reduce(a, modulus);
    int dr = degree(r);
    if (dr < db) return {{}, r};
    Poly q(dr - db + 1, 0);
    r.resize(dr + 1);
    for (int i = dr; i >= db; --i) {
        mpz_class c = modred(r[i], modulus);
        if (c == 0) continue;
        q[i - db] = c;
        for (int j = 0; j <= db; ++j) mpz_submul(r[i - db + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
    }
    r.resize(db);
    for (auto& c : r) c = modred(c, modulus);
    trim(r);
    trim(q);
    return {q, r};
}

Poly rem_monic(const Poly& a, const Poly& b, const mpz_class& modulus) { return divmod_monic(a, b, modulus).second; }

Poly compose_shift(const Poly& a, const mpz_class& r, const mpz_class& modulus) {
    // Horner in y + r
    Poly out;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
        out = mul(out, Poly{r, 1}, modulus);
        out = add(out, Poly{a[i]}, modulus);
    }
    return out;
}

mpz_class eval(const Poly& a, const mpz_class& x, const mpz_class& modulus) {
    mpz_class r = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) r = modred(r * x + a[i], modulus);
    return r;
}

fp::Poly to_fp(const Poly& a, long p) {
    fp::Poly r(a.size());
    mpz_class pp = p;
    for (size_t i = 0; i < a.size(); ++i) r[i] = modred(a[i], pp).get_si();
    fp::trim(r);
    return r;
}

Poly from_fp(const fp::Poly& a) {
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<long>(a[i]);
    trim(r);
    return r;
}

void hensel_lift(const Poly& f, Poly& g, Poly& h, long p, int M) {
    fp::Poly gb = to_fp(g, p), hb = to_fp(h, p);
    auto eg = fp::ext_gcd(gb, hb, p);
    if (fp::degree(eg.g) != 0) throw std::domain_error("hensel_lift: factors not coprime mod p");
    Poly s = from_fp(eg.s), t = from_fp(eg.t);
    mpz_class pp = p, pj = p;
    for (int j = 1; j < M; ++j) {
        mpz_class next = pj * pp;
        Poly err = sub(f, mul(g, h, next), next);
        for (auto& c : err) {
            if (c % pj != 0) throw std::logic_error("hensel_lift: invariant broken");
            c /= pj;
        }
        // b = t*err rem g, a = s*err + q*h (all mod p)
        auto [q, b] = divmod_monic(mul(t, err, pp), reduce(g, pp), pp);
        Poly a = add(mul(s, err, pp), mul(q, h, pp), pp);
        g = add(g, scale(b, pj, next), next);
        h = add(h, scale(a, pj, next), next);
        pj = next;
    }
}

std::vector<Poly> hensel_lift_multi(const Poly& f, const std::vector<fp::Poly>& factors, long p, int M) {
    std::vector<Poly> out;
    mpz_class pm;
    mpz_ui_pow_ui(pm.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(M));
    Poly rest = reduce(f, pm);
    for (size_t i = 0; i + 1 < factors.size(); ++i) {
        fp::Poly other{1};
        for (size_t j = i + 1; j < factors.size(); ++j) other = fp::mul(other, factors[j], p);
        Poly g = from_fp(factors[i]);
        Poly h = from_fp(other);
        hensel_lift(rest, g, h, p, M);
        out.push_back(g);
        rest = h;
    }
    if (!factors.empty()) out.push_back(rest);
    return out;
}

long ord_p(const mpz_class& x, long p, long cap) {
    if (x == 0) return cap;
    mpz_class t = x;
    long v = 0;
    while (v < cap && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

}  // namespace imt::zp
