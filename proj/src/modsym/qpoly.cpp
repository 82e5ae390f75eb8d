#include "imt/modsym/qpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace imt::qp {

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

Poly sub(const Poly& a, const Poly& b) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    trim(c);
    return c;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    int db = degree(b);
    if (db < 0) throw std::domain_error("qp::divmod: division by zero");
    Poly r = a;
    trim(r);
    int dr = degree(r);
    Poly q(std::max(dr - db + 1, 0), 0);
    mpq_class lead_inv = 1 / b[db];
    while (dr >= db) {
        mpq_class c = r[dr] * lead_inv;
        q[dr - db] = c;
        for (int i = 0; i <= db; ++i) r[dr - db + i] -= c * b[i];
        trim(r);
        dr = degree(r);
    }
    trim(q);
    return {q, r};
}

Poly monic(const Poly& a) {
    Poly r = a;
    trim(r);
    if (r.empty()) return r;
    mpq_class inv = 1 / r.back();
    for (auto& c : r) c *= inv;
    return r;
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = monic(a), y = monic(b);
    while (!y.empty()) {
        Poly r = divmod(x, y).second;
        x = std::move(y);
        y = monic(r);
    }
    return monic(x);
}

Poly derivative(const Poly& a) {
    Poly d;
    for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
    trim(d);
    return d;
}

Poly from_z(const zp::Poly& f) {
    Poly r;
    for (auto& c : f) r.emplace_back(c);
    return r;
}

zp::Poly to_z(const Poly& f) {
    zp::Poly r;
    for (auto& c : f) {
        if (c.get_den() != 1) throw std::domain_error("qp::to_z: non-integral coefficient");
        r.push_back(c.get_num());
    }
    return r;
}

namespace {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

mpz_class symmetric(const mpz_class& x, const mpz_class& m) {
    mpz_class r = x % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return r;
}

// exact division test over Z for monic divisor g
bool divides(const zp::Poly& f, const zp::Poly& g, zp::Poly& quotient) {
    auto [q, r] = zp::divmod_monic(f, g, 0);
    zp::trim(r);
    if (!r.empty()) return false;
    quotient = q;
    return true;
}

std::vector<zp::Poly> zassenhaus(const zp::Poly& f) {
    const int n = zp::degree(f);
    if (n <= 1) return {f};
    // choose a prime with f squarefree mod l and few factors
    long best_l = 0;
    std::vector<fp::Factor> best;
    int tried = 0;
    for (long l = 3; tried < 8; l += 2) {
        if (!is_prime(l)) continue;
        fp::Poly fl = zp::to_fp(f, l);
        if (fp::degree(fl) != n) continue;
        auto fac = fp::factor(fl, l);
        bool sqfree = std::all_of(fac.begin(), fac.end(), [](auto& x) { return x.mult == 1; });
        if (!sqfree) continue;
        ++tried;
        if (best_l == 0 || fac.size() < best.size()) {
            best_l = l;
            best = fac;
        }
        if (best.size() == 1) break;
    }
    if (best.size() == 1) return {f};
    // coefficient bound for monic factors: 2^n * ||f||_2
    mpz_class norm2 = 0;
    for (auto& c : f) norm2 += c * c;
    mpz_class root = sqrt(norm2) + 1;
    mpz_class bound = 2 * (root << n) + 1;
    int a = 1;
    mpz_class mod = best_l;
    while (mod <= bound) {
        mod *= best_l;
        ++a;
    }
    std::vector<fp::Poly> polys;
    for (auto& x : best) polys.push_back(x.poly);
    std::vector<zp::Poly> lifted = zp::hensel_lift_multi(f, polys, best_l, a);

    std::vector<zp::Poly> out;
    zp::Poly rest = f;
    std::vector<int> alive(lifted.size());
    for (size_t i = 0; i < lifted.size(); ++i) alive[i] = static_cast<int>(i);
    size_t s = 1;
    while (2 * s <= alive.size()) {
        bool found = false;
        std::vector<int> idx(s);
        for (size_t i = 0; i < s; ++i) idx[i] = static_cast<int>(i);
        while (true) {
            zp::Poly g = {1};
            for (int i : idx) g = zp::mul(g, lifted[alive[i]], mod);
            for (auto& c : g) c = symmetric(c, mod);
            zp::Poly q;
            if (divides(rest, g, q)) {
                out.push_back(g);
                rest = q;
                std::vector<int> keep;
                for (size_t i = 0; i < alive.size(); ++i)
                    if (std::find(idx.begin(), idx.end(), static_cast<int>(i)) == idx.end())
                        keep.push_back(alive[i]);
                alive = keep;
                found = true;
                break;
            }
            // next combination
            int i = static_cast<int>(s) - 1;
            while (i >= 0 && idx[i] == static_cast<int>(alive.size() - s) + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (zp::degree(rest) > 0) out.push_back(rest);
    return out;
}

}  // namespace

std::vector<Factor> factor_monic(const zp::Poly& f0) {
    zp::Poly f = f0;
    zp::trim(f);
    if (f.empty() || f.back() != 1) throw std::invalid_argument("factor_monic: polynomial must be monic");
    if (zp::degree(f) == 0) return {};
    Poly fq = from_z(f);
    Poly g = gcd(fq, derivative(fq));
    zp::Poly sqf = to_z(divmod(fq, g).first);
    std::vector<Factor> out;
    for (auto& h : zassenhaus(sqf)) {
        int m = 0;
        zp::Poly q;
        while (zp::degree(f) >= zp::degree(h) && divides(f, h, q)) {
            f = q;
            ++m;
        }
        out.push_back({h, m});
    }
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
        if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
        return a.poly < b.poly;
    });
    return out;
}

}  // namespace imt::qp
