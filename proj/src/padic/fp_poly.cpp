#include "imt/padic/fp_poly.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace imt::fp {

Coeff reduce(Coeff a, Coeff p) {
    a %= p;
    return a < 0 ? a + p : a;
}

Coeff pow(Coeff a, std::uint64_t e, Coeff p) {
    Coeff r = 1 % p;
    a = reduce(a, p);
    while (e) {
        if (e & 1) r = static_cast<Coeff>((__int128)r * a % p);
        a = static_cast<Coeff>((__int128)a * a % p);
        e >>= 1;
    }
    return r;
}

Coeff inv(Coeff a, Coeff p) {
    a = reduce(a, p);
    if (a == 0) throw std::domain_error("fp::inv of zero");
    Coeff t = 0, nt = 1, r = p, nr = a;
    while (nr) {
        Coeff q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    return reduce(t, p);
}

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

bool is_zero(const Poly& f) { return degree(f) < 0; }

Poly add(const Poly& a, const Poly& b, Coeff p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = reduce(r[i] + b[i], p);
    trim(r);
    return r;
}

Poly sub(const Poly& a, const Poly& b, Coeff p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = reduce(r[i] - b[i], p);
    trim(r);
    return r;
}

Poly mul(const Poly& a, const Poly& b, Coeff p) {
    if (a.empty() || b.empty()) return {};
    std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            acc[i + j] += static_cast<unsigned __int128>(a[i]) * static_cast<unsigned __int128>(b[j]);
    }
    Poly r(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<Coeff>(acc[i] % static_cast<unsigned __int128>(p));
    trim(r);
    return r;
}

Poly scale(const Poly& a, Coeff s, Coeff p) {
    Poly r(a.size());
    s = reduce(s, p);
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<Coeff>((__int128)a[i] * s % p);
    trim(r);
    return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, Coeff p) {
    int db = degree(b);
    if (db < 0) throw std::domain_error("fp::divmod by zero");
    Poly r = a;
    trim(r);
    int dr = degree(r);
    if (dr < db) return {{}, r};
    Poly q(dr - db + 1, 0);
    Coeff lead_inv = inv(b[db], p);
    for (int i = dr; i >= db; --i) {
        Coeff c = static_cast<Coeff>((__int128)r[i] * lead_inv % p);
        if (!c) continue;
        q[i - db] = c;
        for (int j = 0; j <= db; ++j)
            r[i - db + j] = reduce(r[i - db + j] - static_cast<Coeff>((__int128)c * b[j] % p), p);
    }
    trim(q);
    trim(r);
    return {q, r};
}

Poly rem(const Poly& a, const Poly& b, Coeff p) { return divmod(a, b, p).second; }

Poly monic(const Poly& a, Coeff p) {
    int d = degree(a);
    if (d < 0) return {};
    return scale(a, inv(a[d], p), p);
}

Poly gcd(const Poly& a, const Poly& b, Coeff p) {
    Poly x = a, y = b;
    trim(x);
    trim(y);
    while (!is_zero(y)) {
        Poly r = rem(x, y, p);
        x = std::move(y);
        y = std::move(r);
    }
    return monic(x, p);
}

ExtGcd ext_gcd(const Poly& a, const Poly& b, Coeff p) {
    Poly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    trim(r0);
    trim(r1);
    while (!is_zero(r1)) {
        auto [q, r] = divmod(r0, r1, p);
        Poly s = sub(s0, mul(q, s1, p), p);
        Poly t = sub(t0, mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
        t0 = std::move(t1);
        t1 = std::move(t);
    }
    int d = degree(r0);
    if (d < 0) return {{}, {}, {}};
    Coeff li = inv(r0[d], p);
    return {scale(r0, li, p), scale(s0, li, p), scale(t0, li, p)};
}

Poly derivative(const Poly& a, Coeff p) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = static_cast<Coeff>((__int128)a[i] * static_cast<Coeff>(i % p) % p);
    trim(r);
    return r;
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& modulus, Coeff p) {
    Poly r = rem(Poly{1}, modulus, p);
    Poly b = rem(base, modulus, p);
    while (e) {
        if (e & 1) r = rem(mul(r, b, p), modulus, p);
        e >>= 1;
        if (e) b = rem(mul(b, b, p), modulus, p);
    }
    return r;
}

Coeff eval(const Poly& a, Coeff x, Coeff p) {
    Coeff r = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) r = reduce(static_cast<Coeff>((__int128)r * x % p) + a[i], p);
    return r;
}

bool less(const Poly& a, const Poly& b) {
    int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    for (int i = 0; i <= da; ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

namespace {

// p-th root of a polynomial in x^p (coefficients are fixed by Frobenius on F_p)
Poly pth_root(const Poly& f, Coeff p) {
    Poly r;
    for (size_t i = 0; i < f.size(); i += static_cast<size_t>(p)) r.push_back(f[i]);
    trim(r);
    return r;
}

// square-free decomposition: returns (g, m) with f = prod g^m
std::vector<Factor> squarefree(const Poly& f0, Coeff p) {
    std::vector<Factor> out;
    Poly f = monic(f0, p);
    if (degree(f) <= 0) return out;
    Poly fp = derivative(f, p);
    if (is_zero(fp)) {
        for (auto& fac : squarefree(pth_root(f, p), p)) out.push_back({fac.poly, fac.mult * static_cast<int>(p)});
        return out;
    }
    Poly c = gcd(f, fp, p);
    Poly w = divmod(f, c, p).first;
    int i = 1;
    while (degree(w) > 0) {
        Poly y = gcd(w, c, p);
        Poly z = divmod(w, y, p).first;
        if (degree(z) > 0) out.push_back({monic(z, p), i});
        ++i;
        w = y;
        c = divmod(c, y, p).first;
    }
    if (degree(c) > 0) {
        for (auto& fac : squarefree(pth_root(c, p), p)) out.push_back({fac.poly, fac.mult * static_cast<int>(p)});
    }
    return out;
}

// distinct-degree factorization of a square-free monic polynomial
std::vector<std::pair<Poly, int>> distinct_degree(const Poly& f0, Coeff p) {
    std::vector<std::pair<Poly, int>> out;
    Poly f = f0;
    Poly x{0, 1};
    Poly h = x;
    for (int d = 1; 2 * d <= degree(f); ++d) {
        h = powmod(h, static_cast<std::uint64_t>(p), f, p);
        Poly g = gcd(f, sub(h, x, p), p);
        if (degree(g) > 0) {
            out.push_back({g, d});
            f = divmod(f, g, p).first;
            h = rem(h, f, p);
        }
    }
    if (degree(f) > 0) out.push_back({f, degree(f)});
    return out;
}

void equal_degree(const Poly& f, int d, Coeff p, std::mt19937_64& rng, std::vector<Poly>& out) {
    int n = degree(f);
    if (n == d) {
        out.push_back(monic(f, p));
        return;
    }
    std::uniform_int_distribution<Coeff> dist(0, p - 1);
    for (;;) {
        Poly a(n);
        for (auto& c : a) c = dist(rng);
        trim(a);
        if (degree(a) <= 0) continue;
        Poly g;
        if (p == 2) {
            // trace map a + a^2 + ... + a^(2^(d-1))
            Poly t = a, s = a;
            for (int i = 1; i < d; ++i) {
                s = rem(mul(s, s, p), f, p);
                t = add(t, s, p);
            }
            g = gcd(f, t, p);
        } else {
            std::uint64_t e = 1;
            for (int i = 0; i < d; ++i) e *= static_cast<std::uint64_t>(p);
            e = (e - 1) / 2;
            Poly b = powmod(a, e, f, p);
            g = gcd(f, sub(b, Poly{1}, p), p);
        }
        int dg = degree(g);
        if (dg > 0 && dg < n) {
            equal_degree(g, d, p, rng, out);
            equal_degree(divmod(f, g, p).first, d, p, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Factor> factor(const Poly& f, Coeff p) {
    std::vector<Factor> out;
    std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(p));
    for (auto& sq : squarefree(f, p)) {
        for (auto& [g, d] : distinct_degree(sq.poly, p)) {
            std::vector<Poly> pieces;
            equal_degree(g, d, p, rng, pieces);
            for (auto& piece : pieces) out.push_back({piece, sq.mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
        if (less(a.poly, b.poly)) return true;
        if (less(b.poly, a.poly)) return false;
        return a.mult < b.mult;
    });
    return out;
}

}  // namespace imt::fp
