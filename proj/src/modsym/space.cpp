#include "imt/modsym/space.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

#include "imt/error.hpp"

namespace imt {

namespace {

mpz_class binom(long n, long r) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, r);
    return b;
}

mpz_class ipow(long a, long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), mpz_class(a).get_mpz_t(), e);
    return r;
}

}  // namespace

std::vector<mpz_class> substitute_monomial(int t, int w, const Mat2& m) {
    std::vector<mpz_class> A(t + 1), B(w - t + 1), out(w + 1, 0);
    for (int i = 0; i <= t; ++i) A[i] = binom(t, i) * ipow(m.a, i) * ipow(m.b, t - i);
    for (int j = 0; j <= w - t; ++j) B[j] = binom(w - t, j) * ipow(m.c, j) * ipow(m.d, w - t - j);
    for (int i = 0; i <= t; ++i)
        if (A[i] != 0)
            for (int j = 0; j <= w - t; ++j) out[i + j] += A[i] * B[j];
    return out;
}

std::vector<mpq_class> substitute(const std::vector<mpq_class>& P, const Mat2& m) {
    const int w = static_cast<int>(P.size()) - 1;
    std::vector<mpq_class> out(w + 1, 0);
    for (int t = 0; t <= w; ++t) {
        if (P[t] == 0) continue;
        auto s = substitute_monomial(t, w, m);
        for (int j = 0; j <= w; ++j)
            if (s[j] != 0) out[j] += P[t] * s[j];
    }
    return out;
}

long ext_gcd(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = a / b;
        long r = a - q * b;
        a = b;
        b = r;
        long t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

Mat2 lift_to_sl2(long c, long d, long N) {
    if (N == 1) return {1, 0, 0, 1};
    c = mod_pos(c, N);
    d = mod_pos(d, N);
    if (c == 0) c = N;
    while (std::gcd(c, d) != 1) d += N;
    long x, y;
    ext_gcd(c, d, x, y);
    return {y, -x, c, d};
}

P1List::P1List(long N) : N_(N) {
    if (N < 1) throw OutOfRange("level must be positive");
    if (N == 1) {
        reps_ = {{0, 0}};
        table_ = {{0, 1}};
        stab_ = {{}};
        return;
    }
    table_.assign(static_cast<size_t>(N * N), {-1, 0});
    std::vector<long> units;
    for (long l = 1; l < N; ++l)
        if (std::gcd(l, N) == 1) units.push_back(l);
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (std::gcd(std::gcd(c, d), N) != 1) continue;
            if (table_[c * N + d].first >= 0) continue;
            int idx = size();
            reps_.push_back({c, d});
            stab_.emplace_back();
            for (long l : units) {
                long c2 = c * l % N, d2 = d * l % N;
                if (table_[c2 * N + d2].first < 0) {
                    table_[c2 * N + d2] = {idx, l};
                } else if (c2 == c && d2 == d && l != 1) {
                    stab_[idx].push_back(l);
                }
            }
        }
}

std::pair<int, long> P1List::normalize(long c, long d) const {
    if (N_ == 1) return {0, 1};
    c = mod_pos(c, N_);
    d = mod_pos(d, N_);
    return table_[c * N_ + d];
}

ModSymSpace::ModSymSpace(long N, int k, DirichletCharacter eps, SpaceLimits limits)
    : N_(N), k_(k), eps_(std::move(eps)), p1_(N), field_(cyclotomic(eps_.order())), order_(eps_.order()) {
    if (k < 2) throw OutOfRange("weight must be at least 2");
    if (eps_.modulus() != N) throw OutOfRange("character modulus differs from the level");
    if (N * k > limits.max_level_times_weight) throw TooLarge("level times weight exceeds the configured bound");
    KElem z = field_.gen();
    zeta_pow_.push_back(field_.one());
    for (long e = 1; e < order_; ++e) zeta_pow_.push_back(field_.mul(zeta_pow_.back(), z));
    build_relations();
    build_boundary();
    cuspidal_ = la::left_kernel(boundary_);
}

void ModSymSpace::build_relations() {
    const int w = k_ - 2;
    const int G = p1_.size() * (k_ - 1);
    const int D = field_degree();
    auto gen_index = [&](int t, int i) { return i * (k_ - 1) + t; };

    // multipliers sign·ζ^e, with -1 folded into ζ when the order is even
    auto canon = [&](Mult m) {
        m.e = mod_pos(m.e, order_);
        if (m.sign < 0 && order_ % 2 == 0) {
            m.sign = 1;
            m.e = mod_pos(m.e + order_ / 2, order_);
        }
        return m;
    };
    auto compose = [&](Mult a, Mult b) { return canon({a.sign * b.sign, a.e + b.e}); };
    auto inverse = [&](Mult a) { return canon({a.sign, -a.e}); };
    auto is_one = [&](Mult a) {
        a = canon(a);
        return a.sign == 1 && a.e == 0;
    };

    std::vector<int> parent(G);
    std::vector<Mult> mult(G, Mult{1, 0});
    std::vector<bool> dead(G, false);
    std::iota(parent.begin(), parent.end(), 0);

    auto find = [&](int g) {
        Mult m{1, 0};
        while (parent[g] != g) {
            m = compose(m, mult[g]);
            g = parent[g];
        }
        return std::pair<int, Mult>{g, m};
    };
    // x_a = u x_b
    auto unite = [&](int a, int b, Mult u) {
        auto [ra, ua] = find(a);
        auto [rb, ub] = find(b);
        Mult v = compose(compose(inverse(ua), u), ub);
        if (ra == rb) {
            if (!is_one(v)) dead[ra] = true;
            return;
        }
        parent[ra] = rb;
        mult[ra] = v;
        if (dead[ra]) dead[rb] = true;
    };

    // -I acts on the polynomial by (-1)^k and on (c:d) through ε(-1)
    bool whole_space_dies = (k_ % 2 == 0 ? 1 : -1) != eps_.parity();
    for (int i = 0; i < p1_.size(); ++i) {
        bool kill = whole_space_dies;
        for (long l : p1_.stabilizer(i))
            if (eps_.exponent(l) != 0) kill = true;
        if (kill)
            for (int t = 0; t <= w; ++t) dead[gen_index(t, i)] = true;
    }

    // x + x σ = 0 with x σ = [P(-Y, X), (d, -c)]
    for (int i = 0; i < p1_.size(); ++i) {
        auto [c, d] = p1_.rep(i);
        auto [j, l] = p1_.normalize(d, -c);
        for (int t = 0; t <= w; ++t) {
            int sign = (t % 2 == 0) ? -1 : 1;
            unite(gen_index(t, i), gen_index(w - t, j), Mult{sign, eps_.exponent(l)});
        }
    }

    // surviving classes
    std::vector<int> cls(G, -1);
    std::vector<int> roots;
    for (int g = 0; g < G; ++g) {
        auto [r, m] = find(g);
        if (dead[r]) continue;
        if (cls[r] < 0) {
            cls[r] = static_cast<int>(roots.size());
            roots.push_back(r);
        }
    }
    const int C = static_cast<int>(roots.size());
    const int cols = C * D;

    // x + x τ + x τ^2 = 0, one τ-orbit of (c:d) at a time
    const Mat2 tau_inv_sub{0, -1, 1, -1};   // P(-Y, X - Y)
    const Mat2 tau2_inv_sub{-1, 1, -1, 0};  // P(-X + Y, -X)
    std::vector<bool> seen(p1_.size(), false);
    std::vector<la::Vec> rows;
    for (int i = 0; i < p1_.size(); ++i) {
        if (seen[i]) continue;
        auto [c, d] = p1_.rep(i);
        seen[i] = true;
        seen[p1_.normalize(d, -c - d).first] = true;
        seen[p1_.normalize(-c - d, c).first] = true;
        for (int t = 0; t <= w; ++t) {
            std::map<int, KElem> rel;
            auto add_term = [&](const std::vector<mpz_class>& P, long cc, long dd) {
                auto [j, l] = p1_.normalize(cc, dd);
                for (int s = 0; s <= w; ++s) {
                    if (P[s] == 0) continue;
                    auto [r, m] = find(gen_index(s, j));
                    if (dead[r]) continue;
                    Mult u = compose(m, Mult{1, eps_.exponent(l)});
                    KElem val = field_.scale(zeta_pow_[u.e], mpq_class(P[s]) * u.sign);
                    auto it = rel.find(cls[r]);
                    if (it == rel.end()) rel.emplace(cls[r], val);
                    else it->second = field_.add(it->second, val);
                }
            };
            std::vector<mpz_class> P(w + 1, 0);
            P[t] = 1;
            add_term(P, c, d);
            add_term(substitute_monomial(t, w, tau_inv_sub), d, -c - d);
            add_term(substitute_monomial(t, w, tau2_inv_sub), -c - d, c);
            for (int z = 0; z < D; ++z) {
                la::Vec row(cols, 0);
                bool nonzero = false;
                for (auto& [cl, val] : rel) {
                    KElem v = field_.mul(val, zeta_pow_[z % order_]);
                    for (int q = 0; q < D; ++q)
                        if (v[q] != 0) {
                            row[cl * D + q] = v[q];
                            nonzero = true;
                        }
                }
                if (nonzero) rows.push_back(std::move(row));
            }
        }
    }

    la::Mat R = la::Mat::from_rows(rows, cols);
    auto [E, piv] = la::rref(R);
    std::vector<int> free_index(cols, -1);
    std::vector<int> pivot_row(cols, -1);
    for (size_t r = 0; r < piv.size(); ++r) pivot_row[piv[r]] = static_cast<int>(r);
    int n = 0;
    for (int q = 0; q < cols; ++q)
        if (pivot_row[q] < 0) {
            free_index[q] = n++;
            int g = roots[q / D];
            basis_.push_back({g % (k_ - 1), g / (k_ - 1), q % D});
        }
    std::vector<la::Vec> qvec(cols, la::Vec(n, 0));
    for (int q = 0; q < cols; ++q) {
        if (free_index[q] >= 0) {
            qvec[q][free_index[q]] = 1;
        } else {
            int r = pivot_row[q];
            for (int f = 0; f < cols; ++f)
                if (free_index[f] >= 0 && E(r, f) != 0) qvec[q][free_index[f]] = -E(r, f);
        }
    }
    gen_table_.assign(static_cast<size_t>(G) * order_, la::Vec(n, 0));
    for (int g = 0; g < G; ++g) {
        auto [r, m] = find(g);
        if (dead[r]) continue;
        for (long e = 0; e < order_; ++e) {
            Mult u = compose(m, Mult{1, e});
            const KElem& coords = zeta_pow_[u.e];
            la::Vec& out = gen_table_[static_cast<size_t>(g) * order_ + e];
            for (int q = 0; q < D; ++q) {
                if (coords[q] == 0) continue;
                mpq_class f = coords[q] * u.sign;
                const la::Vec& src = qvec[cls[r] * D + q];
                for (int j = 0; j < n; ++j)
                    if (src[j] != 0) out[j] += f * src[j];
            }
        }
    }
}

const la::Vec& ModSymSpace::generator(int t, int i, long zeta) const {
    return gen_table_[static_cast<size_t>(i * (k_ - 1) + t) * order_ + mod_pos(zeta, order_)];
}

void ModSymSpace::add_generator(la::Vec& out, const mpq_class& coef, int t, int i, long zeta) const {
    const la::Vec& g = generator(t, i, zeta);
    for (size_t j = 0; j < out.size(); ++j)
        if (g[j] != 0) out[j] += coef * g[j];
}

la::Vec ModSymSpace::manin_vector(const std::vector<mpq_class>& P, long c, long d, long zeta) const {
    la::Vec out(dimension(), 0);
    auto [i, l] = p1_.normalize(c, d);
    if (i < 0) return out;
    long e = zeta + eps_.exponent(l);
    for (int t = 0; t < k_ - 1; ++t)
        if (P[t] != 0) add_generator(out, P[t], t, i, e);
    return out;
}

la::Mat ModSymSpace::hecke(long ell) const {
    // Heilbronn-Merel matrices of determinant ell
    std::vector<Mat2> H;
    for (long a = 1; a <= ell; ++a)
        for (long d = 1; d <= ell; ++d)
            for (long b = 0; b < a; ++b) {
                long bc = a * d - ell;
                if (bc < 0) continue;
                if (b == 0) {
                    if (bc == 0)
                        for (long c = 0; c < d; ++c) H.push_back({a, 0, c, d});
                    continue;
                }
                if (bc % b) continue;
                long c = bc / b;
                if (c < d) H.push_back({a, b, c, d});
            }
    if (N_ % ell == 0) throw OutOfRange("Hecke operator at a prime dividing the level is not implemented");
    const int n = dimension();
    const int w = k_ - 2;
    la::Mat T(n, n);
    for (int r = 0; r < n; ++r) {
        const BasisSymbol& b = basis_[r];
        auto [c, d] = p1_.rep(b.p1);
        la::Vec img(n, 0);
        for (const Mat2& h : H) {
            auto [j, l] = p1_.normalize(c * h.a + d * h.c, c * h.b + d * h.d);
            if (j < 0) continue;
            auto P = substitute_monomial(b.t, w, h);
            long e = b.zeta + eps_.exponent(l);
            for (int t = 0; t <= w; ++t)
                if (P[t] != 0) add_generator(img, mpq_class(P[t]), t, j, e);
        }
        T.set_row(r, img);
    }
    return T;
}

la::Mat ModSymSpace::star() const {
    const int n = dimension();
    la::Mat J(n, n);
    for (int r = 0; r < n; ++r) {
        const BasisSymbol& b = basis_[r];
        auto [c, d] = p1_.rep(b.p1);
        auto [j, l] = p1_.normalize(-c, d);
        la::Vec img(n, 0);
        add_generator(img, b.t % 2 ? -1 : 1, b.t, j, b.zeta + eps_.exponent(l));
        J.set_row(r, img);
    }
    return J;
}

la::Mat ModSymSpace::zeta_action() const {
    const int n = dimension();
    la::Mat Z(n, n);
    for (int r = 0; r < n; ++r) {
        const BasisSymbol& b = basis_[r];
        Z.set_row(r, generator(b.t, b.p1, b.zeta + 1));
    }
    return Z;
}

std::pair<int, ModSymSpace::Mult> ModSymSpace::cusp_class(long u, long v) {
    long p, q;
    ext_gcd(u, v, p, q);
    Mat2 h{u, -q, v, p};
    auto sign_k = [&](int s) { return (s < 0 && k_ % 2) ? -1 : 1; };
    for (size_t i = 0; i < cusps_.size(); ++i) {
        const Mat2& hi = cusps_[i].h;
        Mat2 hi_inv{hi.d, -hi.b, -hi.c, hi.a};
        for (int s : {1, -1})
            for (long j = 0; j < std::max(N_, 1L); ++j) {
                Mat2 g = h * Mat2{s, s * j, 0, s} * hi_inv;
                if (mod_pos(g.c, N_) != 0) continue;
                return {static_cast<int>(i), Mult{sign_k(s), eps_.exponent(g.d)}};
            }
    }
    bool dead = false;
    Mat2 h_inv{h.d, -h.b, -h.c, h.a};
    for (int s : {1, -1})
        for (long j = 0; j < std::max(N_, 1L); ++j) {
            if (s == 1 && j == 0) continue;
            Mat2 g = h * Mat2{s, s * j, 0, s} * h_inv;
            if (mod_pos(g.c, N_) != 0) continue;
            int sg = sign_k(s);
            long e = eps_.exponent(g.d);
            bool trivial = (e == 0 && sg == 1) || (order_ % 2 == 0 && sg == -1 && 2 * e == order_);
            if (!trivial) dead = true;
        }
    cusps_.push_back({u, v, h, dead});
    return {static_cast<int>(cusps_.size()) - 1, Mult{1, 0}};
}

void ModSymSpace::build_boundary() {
    const int n = dimension();
    const int D = field_degree();
    std::vector<std::map<int, mpq_class>> images(n);
    auto add = [&](int r, mpq_class coef, long u, long v, long zeta) {
        auto [ci, m] = cusp_class(u, v);
        if (cusps_[ci].dead) return;
        const KElem& z = zeta_pow_[mod_pos(zeta + m.e, order_)];
        for (int q = 0; q < D; ++q)
            if (z[q] != 0) images[r][ci * D + q] += coef * m.sign * z[q];
    };
    for (int r = 0; r < n; ++r) {
        const BasisSymbol& b = basis_[r];
        auto [c, d] = p1_.rep(b.p1);
        Mat2 g = lift_to_sl2(c, d, N_);
        if (b.t == k_ - 2) add(r, 1, g.a, g.c, b.zeta);
        if (b.t == 0) add(r, -1, g.b, g.d, b.zeta);
    }
    boundary_ = la::Mat(n, static_cast<int>(cusps_.size()) * D);
    for (int r = 0; r < n; ++r)
        for (auto& [col, val] : images[r]) boundary_(r, col) = val;
}

std::vector<la::Vec> ModSymSpace::cuspidal_sign_basis(int sign) const {
    la::Mat J = star();
    const int n = dimension();
    std::vector<la::Vec> rows;
    for (auto& v : cuspidal_) {
        la::Vec img = la::vec_mat(v, J);
        for (int j = 0; j < n; ++j) img[j] -= sign * v[j];
        rows.push_back(img);
    }
    auto combos = la::left_kernel(la::Mat::from_rows(rows, n));
    std::vector<la::Vec> out;
    for (auto& c : combos) {
        la::Vec x(n, 0);
        for (size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0)
                for (int j = 0; j < n; ++j) x[j] += c[i] * cuspidal_[i][j];
        out.push_back(x);
    }
    return out;
}

int gamma1_cuspidal_dimension(long N, int k) {
    int total = 0;
    for (auto& eps : DirichletCharacter::orbit_representatives(N)) {
        if (eps.parity() != (k % 2 == 0 ? 1 : -1)) continue;
        total += ModSymSpace(N, k, eps).cuspidal_dimension();
    }
    return total;
}

}  // namespace imt
