#include "imt/modsym/character.hpp"

#include <gmpxx.h>

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "imt/error.hpp"

namespace imt {

long gcd_long(long a, long b) { return std::gcd(a, b); }

long mod_pos(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long euler_phi(long n) {
    long r = n;
    for (long q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        while (n % q == 0) n /= q;
        r -= r / q;
    }
    if (n > 1) r -= r / n;
    return r;
}

DirichletCharacter::DirichletCharacter(long N, long order, std::vector<int> exps, std::string spec)
    : N_(N), order_(order), exps_(std::move(exps)), spec_(std::move(spec)) {
    // reduce to the exact order
    long g = order_;
    for (int e : exps_)
        if (e >= 0) g = std::gcd(g, static_cast<long>(e));
    if (g > 1) {
        for (int& e : exps_)
            if (e >= 0) e = static_cast<int>(e / g);
        order_ /= g;
    }
}

DirichletCharacter DirichletCharacter::trivial(long N) {
    if (N < 1) throw OutOfRange("character modulus must be positive");
    std::vector<int> e(N, -1);
    for (long a = 0; a < N; ++a)
        if (std::gcd(a, N) == 1) e[a] = 0;
    if (N == 1) e[0] = 0;
    return DirichletCharacter(N, 1, e, "trivial");
}

DirichletCharacter DirichletCharacter::kronecker(long N, long D) {
    std::vector<int> e(N, -1);
    for (long a = 0; a < N; ++a) {
        if (std::gcd(a, N) != 1 && N != 1) continue;
        int v = mpz_si_kronecker(D, mpz_class(a).get_mpz_t());
        for (long t = 1; t <= 4; ++t) {
            int w = mpz_si_kronecker(D, mpz_class(a + t * N).get_mpz_t());
            if (w != v) throw OutOfRange("Kronecker symbol is not periodic mod the level");
        }
        if (v == 0) throw OutOfRange("Kronecker symbol vanishes on a unit");
        e[a] = v == 1 ? 0 : 1;
    }
    return DirichletCharacter(N, 2, e, "kronecker:" + std::to_string(D));
}

DirichletCharacter DirichletCharacter::from_images(long N, long order, const std::vector<std::pair<long, long>>& images) {
    std::vector<int> e(N, -1);
    e[mod_pos(1, N)] = 0;
    std::vector<long> frontier = {mod_pos(1, N)};
    while (!frontier.empty()) {
        std::vector<long> next;
        for (long a : frontier)
            for (auto [g, x] : images) {
                long b = mod_pos(a * g, N);
                int v = static_cast<int>(mod_pos(e[a] + x, order));
                if (e[b] < 0) {
                    e[b] = v;
                    next.push_back(b);
                } else if (e[b] != v) {
                    throw OutOfRange("character images are inconsistent");
                }
            }
        frontier = std::move(next);
    }
    for (long a = 0; a < N; ++a)
        if (std::gcd(a, N) == 1 && e[a] < 0) throw OutOfRange("character generators do not span the unit group");
    std::ostringstream os;
    os << "order:" << order << ";";
    for (size_t i = 0; i < images.size(); ++i) os << (i ? "," : "") << images[i].first << "=" << images[i].second;
    return DirichletCharacter(N, order, e, os.str());
}

DirichletCharacter DirichletCharacter::parse(long N, const std::string& spec) {
    if (spec.empty() || spec == "trivial") return trivial(N);
    if (spec.rfind("kronecker:", 0) == 0) return kronecker(N, std::stol(spec.substr(10)));
    if (spec.rfind("order:", 0) == 0) {
        auto semi = spec.find(';');
        if (semi == std::string::npos) throw OutOfRange("bad character spec: " + spec);
        long order = std::stol(spec.substr(6, semi - 6));
        std::vector<std::pair<long, long>> imgs;
        std::stringstream ss(spec.substr(semi + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) throw OutOfRange("bad character spec: " + spec);
            imgs.emplace_back(std::stol(item.substr(0, eq)), std::stol(item.substr(eq + 1)));
        }
        return from_images(N, order, imgs);
    }
    throw OutOfRange("unknown character spec: " + spec);
}

int DirichletCharacter::exponent(long a) const { return exps_[mod_pos(a, N_)]; }

int DirichletCharacter::parity() const {
    int e = exponent(-1);
    if (e == 0) return 1;
    if (2 * e == order_) return -1;
    throw OutOfRange("character value at -1 is not ±1");
}

long DirichletCharacter::conductor() const {
    for (long M = 1; M <= N_; ++M) {
        if (N_ % M) continue;
        bool ok = true;
        for (long a = 0; a < N_ && ok; ++a) {
            if (exps_[a] < 0) continue;
            if (mod_pos(a - 1, M) == 0 && exps_[a] != 0) ok = false;
        }
        if (ok) return M;
    }
    return N_;
}

DirichletCharacter DirichletCharacter::power(long k) const {
    std::vector<int> e = exps_;
    for (auto& x : e)
        if (x >= 0) x = static_cast<int>(mod_pos(static_cast<long>(x) * k, order_));
    return DirichletCharacter(N_, order_, e, spec_ + "^" + std::to_string(k));
}

std::vector<DirichletCharacter> DirichletCharacter::orbit_representatives(long N) {
    // generators of (Z/N)^x as a direct product of cyclic groups, via CRT
    std::vector<std::pair<long, long>> gens;  // (generator, order)
    long n = N;
    std::vector<std::pair<long, int>> pf;
    for (long q = 2; q * q <= n; ++q) {
        int e = 0;
        while (n % q == 0) n /= q, ++e;
        if (e) pf.push_back({q, e});
    }
    if (n > 1) pf.push_back({n, 1});
    auto crt_lift = [&](long pe, long x) {
        // y ≡ x mod pe, y ≡ 1 mod N/pe
        long other = N / pe;
        for (long y = x; y < N; y += pe)
            if (mod_pos(y, other) == 1 % other) return y;
        return x;
    };
    for (auto [q, e] : pf) {
        long pe = 1;
        for (int i = 0; i < e; ++i) pe *= q;
        if (q == 2) {
            if (e >= 2) gens.push_back({crt_lift(pe, pe - 1), 2});
            if (e >= 3) gens.push_back({crt_lift(pe, 5), pe / 4});
        } else {
            long phi = pe / q * (q - 1);
            for (long g = 2; g < pe; ++g) {
                if (g % q == 0) continue;
                long x = 1, ord = 0;
                do {
                    x = x * g % pe;
                    ++ord;
                } while (x != 1);
                if (ord == phi) {
                    gens.push_back({crt_lift(pe, g), phi});
                    break;
                }
            }
        }
    }
    long ex = 1;
    for (auto [g, o] : gens) ex = std::lcm(ex, o);
    std::vector<DirichletCharacter> all;
    std::vector<long> idx(gens.size(), 0);
    while (true) {
        std::vector<std::pair<long, long>> imgs;
        for (size_t i = 0; i < gens.size(); ++i) imgs.push_back({gens[i].first, idx[i] * (ex / gens[i].second)});
        all.push_back(gens.empty() ? trivial(N) : from_images(N, ex, imgs));
        size_t i = 0;
        while (i < gens.size() && ++idx[i] == gens[i].second) idx[i++] = 0;
        if (i == gens.size()) break;
    }
    std::vector<DirichletCharacter> reps;
    std::vector<bool> seen(all.size(), false);
    for (size_t i = 0; i < all.size(); ++i) {
        if (seen[i]) continue;
        reps.push_back(all[i]);
        for (long a = 1; a <= all[i].order(); ++a) {
            if (std::gcd(a, all[i].order()) != 1) continue;
            auto c = all[i].power(a);
            for (size_t j = i; j < all.size(); ++j)
                if (!seen[j] && all[j] == c) seen[j] = true;
        }
    }
    return reps;
}

}  // namespace imt
