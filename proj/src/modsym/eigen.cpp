#include "imt/modsym/eigen.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "imt/error.hpp"
#include "imt/modsym/qpoly.hpp"

namespace imt {

namespace {

mpz_class binom(long n, long r) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, r);
    return b;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

QCusp QCusp::rational(long num, long den) {
    if (den == 0) return infinity();
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long g = std::gcd(num, den);
    return {num / g, den / g};
}

QCusp act(const Mat2& g, const QCusp& x) {
    return QCusp::rational(g.a * x.num + g.b * x.den, g.c * x.num + g.d * x.den);
}

KPoly act_right(const NumberField& K, const KPoly& P, const Mat2& g) {
    const int w = static_cast<int>(P.size()) - 1;
    KPoly out(w + 1, K.zero());
    Mat2 sub{g.d, -g.c, -g.b, g.a};
    for (int t = 0; t <= w; ++t) {
        if (NumberField::is_zero(P[t])) continue;
        auto s = substitute_monomial(t, w, sub);
        for (int j = 0; j <= w; ++j)
            if (s[j] != 0) out[j] = K.add(out[j], K.scale(P[t], mpq_class(s[j])));
    }
    return out;
}

EigenSymbol::EigenSymbol(std::shared_ptr<const ModSymSpace> space, NumberFieldRef field, int sign,
                         std::vector<la::Vec> functional, std::string generator, long check_bound)
    : space_(std::move(space)), field_(std::move(field)), sign_(sign), functional_(std::move(functional)),
      generator_(std::move(generator)) {
    const NumberField& K = *field_;
    const int n = space_->dimension();
    int pivot = -1;
    for (int r = 0; r < n && pivot < 0; ++r)
        if (!NumberField::is_zero(row_value(r))) pivot = r;
    if (pivot < 0) throw EigenSplitFailed("zero eigen-functional");
    auto eigen_of = [&](const la::Mat& T, const char* what) {
        KElem a = K.mul(apply(T, pivot), K.inv(row_value(pivot)));
        for (int r = 0; r < n; ++r)
            if (apply(T, r) != K.mul(a, row_value(r)))
                throw EigenSplitFailed(std::string("functional is not an eigenvector for ") + what);
        return a;
    };
    if (space_->character().order() > 2) {
        zeta_ = eigen_of(space_->zeta_action(), "the character field");
    } else {
        zeta_ = K.from_rational(space_->character().order() == 2 ? -1 : 1);
    }
    eigen_of(space_->star(), "the star involution");
    for (long ell = 2; ell <= check_bound; ++ell) {
        if (!is_prime(ell) || level() % ell == 0) continue;
        eigenvalues_[ell] = eigen_of(space_->hecke(ell), "a Hecke operator");
    }
    const int P1 = space_->p1().size();
    values_.reserve(static_cast<size_t>(P1) * (weight() - 1));
    for (int i = 0; i < P1; ++i)
        for (int t = 0; t < weight() - 1; ++t) {
            const la::Vec& g = space_->generator(t, i, 0);
            KElem v(K.degree());
            for (int j = 0; j < K.degree(); ++j) v[j] = la::dot(functional_[j], g);
            values_.push_back(std::move(v));
        }
}

KElem EigenSymbol::row_value(int row) const {
    KElem v(field_->degree());
    for (int j = 0; j < field_->degree(); ++j) v[j] = functional_[j][row];
    return v;
}

KElem EigenSymbol::apply(const la::Mat& T, int row) const {
    KElem v(field_->degree(), 0);
    for (int j = 0; j < field_->degree(); ++j)
        for (int c = 0; c < T.cols(); ++c)
            if (T(row, c) != 0 && functional_[j][c] != 0) v[j] += T(row, c) * functional_[j][c];
    return v;
}

KElem EigenSymbol::hecke_eigenvalue(long ell) const {
    auto it = eigenvalues_.find(ell);
    if (it != eigenvalues_.end()) return it->second;
    la::Mat T = space_->hecke(ell);
    const NumberField& K = *field_;
    for (int r = 0; r < space_->dimension(); ++r) {
        KElem v = row_value(r);
        if (!NumberField::is_zero(v)) return K.mul(apply(T, r), K.inv(v));
    }
    throw EigenSplitFailed("zero eigen-functional");
}

KElem EigenSymbol::character_value(long a) const {
    int e = space_->character().exponent(a);
    if (e < 0) return field_->zero();
    return field_->pow(zeta_, e);
}

KElem EigenSymbol::coefficient(long n) const {
    const NumberField& K = *field_;
    if (n < 1) throw OutOfRange("coefficient index must be positive");
    KElem result = K.one();
    long m = n;
    for (long ell = 2; m > 1; ++ell) {
        if (m % ell) continue;
        int r = 0;
        while (m % ell == 0) m /= ell, ++r;
        if (level() % ell == 0) throw OutOfRange("coefficients at primes dividing the level are not computed");
        KElem a = hecke_eigenvalue(ell);
        KElem c = character_value(ell);
        mpz_class lk;
        mpz_ui_pow_ui(lk.get_mpz_t(), ell, weight() - 1);
        c = K.scale(c, mpq_class(lk));
        KElem prev = K.one(), cur = a;
        for (int i = 1; i < r; ++i) {
            KElem next = K.sub(K.mul(a, cur), K.mul(c, prev));
            prev = cur;
            cur = next;
        }
        result = K.mul(result, cur);
    }
    return result;
}

KElem EigenSymbol::manin_value(const std::vector<mpq_class>& P, long c, long d) const {
    const NumberField& K = *field_;
    auto [i, l] = space_->p1().normalize(c, d);
    if (i < 0) return K.zero();
    KElem s = K.zero();
    for (int t = 0; t < weight() - 1; ++t)
        if (P[t] != 0) s = K.add(s, K.scale(generator_value(i, t), P[t]));
    int e = space_->character().exponent(l);
    if (e != 0) s = K.mul(s, K.pow(zeta_, e));
    return s;
}

std::vector<Mat2> EigenSymbol::path_from_zero(const QCusp& x) const {
    std::vector<Mat2> out = {{1, 0, 0, 1}};
    if (x.is_infinity()) return out;
    long a = x.num, b = x.den;
    long p2 = 0, q2 = 1, p1 = 1, q1 = 0;
    for (int i = 0; b != 0; ++i) {
        long ai = floor_div(a, b);
        long r = a - ai * b;
        a = b;
        b = r;
        long p = ai * p1 + p2, q = ai * q1 + q2;
        long s = (i % 2 == 0) ? -1 : 1;  // (-1)^(i-1)
        out.push_back({s * p, p1, s * q, q1});
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
    }
    return out;
}

std::vector<KElem> EigenSymbol::path_values(const QCusp& from, const QCusp& to) const {
    const NumberField& K = *field_;
    const int w = weight() - 2;
    std::vector<KElem> out(w + 1, K.zero());
    auto accumulate = [&](const QCusp& x, int sgn) {
        for (const Mat2& g : path_from_zero(x)) {
            auto [i, l] = space_->p1().normalize(g.c, g.d);
            if (i < 0) continue;
            KElem chi = character_value(l);
            for (int t = 0; t <= w; ++t) {
                auto s = substitute_monomial(t, w, g);
                KElem v = K.zero();
                for (int j = 0; j <= w; ++j)
                    if (s[j] != 0) v = K.add(v, K.scale(generator_value(i, j), mpq_class(s[j])));
                v = K.mul(v, chi);
                out[t] = sgn > 0 ? K.add(out[t], v) : K.sub(out[t], v);
            }
        }
    };
    accumulate(to, 1);
    accumulate(from, -1);
    return out;
}

KElem EigenSymbol::path_value(const std::vector<mpq_class>& P, const QCusp& from, const QCusp& to) const {
    const NumberField& K = *field_;
    KElem total = K.zero();
    auto accumulate = [&](const QCusp& x, int sgn) {
        for (const Mat2& g : path_from_zero(x)) {
            KElem v = manin_value(substitute(P, g), g.c, g.d);
            total = sgn > 0 ? K.add(total, v) : K.sub(total, v);
        }
    };
    accumulate(to, 1);
    accumulate(from, -1);
    return total;
}

KPoly EigenSymbol::evaluate(const QCusp& r, const QCusp& s) const {
    const NumberField& K = *field_;
    const int w = weight() - 2;
    auto vals = path_values(s, r);
    KPoly out(w + 1);
    for (int j = 0; j <= w; ++j) out[j] = K.scale(vals[j], mpq_class(binom(w, j)));
    return out;
}

EigenSymbol EigenSymbol::regenerated(const KElem& g, const std::string& description, long check_bound) const {
    const NumberField& K = *field_;
    const int d = K.degree();
    la::Mat B(d, d), Mg(d, d);
    KElem x = K.one();
    for (int i = 0; i < d; ++i) {
        B.set_row(i, x);
        KElem basis(d, 0);
        basis[i] = 1;
        Mg.set_row(i, K.mul(g, basis));
        x = K.mul(x, g);
    }
    auto factors = qp::factor_monic(qp::to_z(la::charpoly(Mg)));
    if (factors.size() != 1 || factors[0].mult != 1) throw OutOfRange("element does not generate the field");
    // θ^j = sum_i C(j, i) g^i
    la::Mat C = la::inverse(B);
    std::vector<la::Vec> E(d, la::Vec(space_->dimension(), 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (C(j, i) == 0) continue;
            for (size_t r = 0; r < E[i].size(); ++r)
                if (functional_[j][r] != 0) E[i][r] += C(j, i) * functional_[j][r];
        }
    return EigenSymbol(space_, std::make_shared<NumberField>(factors[0].poly), sign_, std::move(E), description,
                       check_bound);
}

EigenSymbol adapt_to_prime(const EigenSymbol& symbol, const PrimeContext& ctx) {
    try {
        hensel_factor(symbol.field().minpoly(), ctx);
        return symbol;
    } catch (const PrecisionExhausted&) {
    }
    const NumberField& K = symbol.field();
    std::vector<std::pair<long, KElem>> a;
    for (long ell = 2; ell <= 13; ++ell)
        if (is_prime(ell) && symbol.level() % ell != 0) a.push_back({ell, symbol.hecke_eigenvalue(ell)});
    std::vector<std::pair<std::string, KElem>> candidates;
    for (auto& [ell, v] : a) candidates.push_back({"a" + std::to_string(ell), v});
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            for (int c : {1, 2, -1, 3})
                candidates.push_back({"a" + std::to_string(a[i].first) + "+" + std::to_string(c) + "*a" +
                                          std::to_string(a[j].first),
                                      K.add(a[i].second, K.scale(a[j].second, c))});
    for (auto& [desc, g] : candidates) {
        try {
            EigenSymbol s = symbol.regenerated(g, desc);
            hensel_factor(s.field().minpoly(), ctx);
            return s;
        } catch (const OutOfRange&) {
        } catch (const PrecisionExhausted&) {
        }
    }
    throw PrecisionExhausted("no field generator with a certifiable factorization at p");
}

std::vector<EigenSymbol> eigen_decompose(std::shared_ptr<const ModSymSpace> space, int sign,
                                         const DecomposeOptions& opts) {
    const int n = space->dimension();
    auto S = space->cuspidal_sign_basis(sign);
    if (S.empty()) return {};
    std::vector<long> primes;
    for (long ell = 2; primes.size() < 4; ++ell)
        if (is_prime(ell) && space->level() % ell != 0 && ell != opts.avoid_prime) primes.push_back(ell);
    std::vector<la::Mat> T;
    for (long ell : primes) T.push_back(space->hecke(ell));
    const bool use_zeta = space->character().order() > 2;
    la::Mat Z = use_zeta ? space->zeta_action() : la::Mat(n, n);

    const std::vector<std::array<int, 5>> candidates = {
        {1, 0, 0, 0, 1}, {1, 1, 0, 0, 2}, {1, -1, 1, 0, 1}, {2, 1, -1, 1, 3}, {1, 3, 2, -1, 1}, {3, -2, 1, 2, 2}};
    int best = -1;
    size_t best_deg = 0;
    la::Mat bestA;
    std::vector<qp::Factor> best_factors;
    for (size_t c = 0; c < candidates.size(); ++c) {
        la::Mat A(n, n);
        for (size_t i = 0; i < primes.size(); ++i)
            if (candidates[c][i]) A = A + la::scale(T[i], candidates[c][i]);
        if (use_zeta) A = A + la::scale(Z, candidates[c][4]);
        auto factors = qp::factor_monic(qp::to_z(la::charpoly(la::restrict_to(A, S))));
        size_t deg = 0;
        for (auto& f : factors)
            if (f.mult == 1) deg += zp::degree(f.poly);
        if (best < 0 || deg > best_deg) {
            best = static_cast<int>(c);
            best_deg = deg;
            bestA = A;
            best_factors = factors;
        }
        if (deg == S.size()) break;
        if (c >= 2 && best_deg > 0) break;
    }
    std::string gen_desc;
    for (size_t i = 0; i < primes.size(); ++i)
        if (candidates[best][i])
            gen_desc += (gen_desc.empty() ? "" : "+") + std::to_string(candidates[best][i]) + "*T" + std::to_string(primes[i]);
    if (use_zeta) gen_desc += "+" + std::to_string(candidates[best][4]) + "*zeta";

    la::Mat J = space->star();
    for (int i = 0; i < n; ++i) J(i, i) -= sign;
    std::vector<EigenSymbol> out;
    for (auto& f : best_factors) {
        if (f.mult != 1) continue;
        const int d = zp::degree(f.poly);
        auto K = std::make_shared<NumberField>(f.poly);
        std::vector<mpq_class> hq;
        for (auto& c : f.poly) hq.emplace_back(c);
        la::Mat H = la::poly_eval(hq, bestA);
        la::Mat stacked(2 * n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                stacked(r, c) = H(r, c);
                stacked(n + r, c) = J(r, c);
            }
        auto W = la::right_kernel(stacked);
        if (static_cast<int>(W.size()) != d) throw EigenSplitFailed("eigenspace dimension differs from the field degree");
        // e = q(A) w with q(x) = h(x) / (x - θ)
        std::vector<KElem> q(d);
        q[d - 1] = K->one();
        for (int m = d - 1; m >= 1; --m) q[m - 1] = K->add(K->from_rational(hq[m]), K->mul(K->gen(), q[m]));
        std::vector<la::Vec> E(d, la::Vec(n, 0));
        la::Vec v = W[0];
        for (int m = 0; m < d; ++m) {
            for (int j = 0; j < d; ++j)
                if (q[m][j] != 0)
                    for (int r = 0; r < n; ++r)
                        if (v[r] != 0) E[j][r] += q[m][j] * v[r];
            v = la::mat_vec(bestA, v);
        }
        // clear denominators and content for a tidy functional
        mpz_class den = 1;
        for (auto& e : E)
            for (auto& x : e) den = lcm(den, mpz_class(x.get_den()));
        for (auto& e : E)
            for (auto& x : e) x *= den;
        out.emplace_back(space, K, sign, std::move(E), gen_desc, opts.check_bound);
    }
    return out;
}

NormalizedSymbol::NormalizedSymbol(const EigenSymbol& symbol, EmbeddedNumberField emb)
    : symbol_(&symbol), emb_(std::move(emb)) {
    const int w = symbol.weight() - 2;
    bool found = false;
    long best = 0;
    for (int i = 0; i < symbol.space().p1().size(); ++i)
        for (int t = 0; t <= w; ++t) {
            KElem x = symbol.field().scale(symbol.generator_value(i, t), mpq_class(binom(w, t)));
            if (NumberField::is_zero(x)) continue;
            auto v = emb_.embed(x).valuation();
            if (!v) continue;
            if (!found || *v < best) best = *v;
            found = true;
        }
    if (!found) throw HypothesisViolated("cannot normalize the zero symbol");
    shift_ = best;
    scale_ = LocalElem::uniformizer(emb_.local).pow(-shift_);
}

LocalElem NormalizedSymbol::embed(const KElem& x) const { return emb_.embed(x) * scale_; }

std::vector<std::pair<QCusp, QCusp>> manin_test_divisors(long M) {
    P1List p1(M);
    std::vector<std::pair<QCusp, QCusp>> out;
    for (int i = 0; i < p1.size(); ++i) {
        auto [c, d] = p1.rep(i);
        Mat2 g = lift_to_sl2(c, d, M);
        out.push_back({QCusp::rational(g.a, g.c), QCusp::rational(g.b, g.d)});
    }
    return out;
}

namespace {

std::vector<std::vector<LocalElem>> test_values(const NormalizedSymbol& phi, long p) {
    std::vector<std::vector<LocalElem>> out;
    for (auto& [r, s] : manin_test_divisors(phi.symbol().level() * p)) {
        KPoly v = phi.symbol().evaluate(r, s);
        std::vector<LocalElem> row;
        for (auto& c : v) row.push_back(phi.embed(c));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

Filtration filtration_level(const NormalizedSymbol& phi, long p) {
    const auto vals = test_values(phi, p);
    const int w = phi.symbol().weight() - 2;
    auto ordp = [](const LocalElem& x) -> std::optional<mpq_class> {
        if (x.exact_zero()) return std::nullopt;
        return x.ord_p();
    };
    auto in_fil = [&](long r) {
        for (auto& row : vals)
            for (long j = 0; j < r && j <= w; ++j) {
                auto o = ordp(row[j]);
                if (o && *o < r - j) return false;
            }
        return true;
    };
    long r = 0;
    while (r <= w && in_fil(r + 1)) ++r;
    auto in_fil_t = [&](long t) {
        for (auto& row : vals)
            for (long j = r + 1 - t; j <= r && j <= w; ++j) {
                auto o = ordp(row[j]);
                if (o && *o < r - j + 1) return false;
            }
        return true;
    };
    long t = 0;
    while (t < r && in_fil_t(t + 1)) ++t;
    return {r, t};
}

long mu_min(const NormalizedSymbol& phi, long p) {
    bool found = false;
    long best = 0;
    for (auto& row : test_values(phi, p)) {
        auto v = row[0].valuation();
        if (!v) continue;
        if (!found || *v < best) best = *v;
        found = true;
    }
    if (!found) throw ZeroReduction("Y^(k-2) coefficient vanishes on every test divisor");
    return best;
}

ReducedSymbol phi_k_reduce(const NormalizedSymbol& phi, long shift) {
    const long p = phi.local()->ctx().p;
    ReducedSymbol out{phi.local()->residual(), p, {}};
    const LocalElem unscale = LocalElem::uniformizer(phi.local()).pow(shift).inverse();
    bool nonzero = false;
    for (auto& row : test_values(phi, p)) {
        const LocalElem x = shift == 0 ? row[0] : row[0] * unscale;
        fp::Poly r = x.valuation_lower_bound() > 0 ? fp::Poly{} : x.residue();
        fp::trim(r);
        if (!r.empty()) nonzero = true;
        out.values.push_back(std::move(r));
    }
    if (!nonzero) throw ZeroReduction("the reduction of the symbol under P -> P(0,1) vanishes");
    return out;
}

namespace {

// a root of h in F_p[y]/(m)
std::optional<fp::Poly> root_in(const fp::Poly& h, const fp::Poly& m, long p) {
    const int f = fp::degree(m);
    long q = 1;
    for (int i = 0; i < f; ++i) q *= p;
    for (long code = 0; code < q; ++code) {
        fp::Poly r(f, 0);
        for (long c = code, i = 0; i < f; ++i, c /= p) r[i] = c % p;
        fp::Poly acc{};
        for (int i = fp::degree(h); i >= 0; --i) acc = fp::add(fp::rem(fp::mul(acc, r, p), m, p), fp::Poly{h[i]}, p);
        fp::trim(acc);
        if (fp::is_zero(acc)) return r;
    }
    return std::nullopt;
}

// re-express values of F_p[y]/(from) in F_p[y]/(to)
std::vector<fp::Poly> transport(const std::vector<fp::Poly>& values, const fp::Poly& from, const fp::Poly& to, long p) {
    if (from == to || fp::degree(from) == 1) return values;
    auto rho = root_in(from, to, p);
    if (!rho) throw HypothesisViolated("residue fields are not isomorphic");
    std::vector<fp::Poly> out;
    for (auto& v : values) {
        fp::Poly acc{};
        for (int i = fp::degree(v); i >= 0; --i) acc = fp::add(fp::rem(fp::mul(acc, *rho, p), to, p), fp::Poly{v[i]}, p);
        fp::trim(acc);
        out.push_back(acc);
    }
    return out;
}

}  // namespace

std::optional<fp::Poly> compare_phi(const ReducedSymbol& f_in, const ReducedSymbol& g) {
    if (f_in.p != g.p || fp::degree(f_in.residual) != fp::degree(g.residual) || f_in.values.size() != g.values.size())
        throw HypothesisViolated("reduced symbols live over different residue fields or test sets");
    const long p = g.p;
    ReducedSymbol f{g.residual, p, transport(f_in.values, f_in.residual, g.residual, p)};
    const fp::Poly& m = g.residual;
    std::optional<fp::Poly> c;
    for (size_t i = 0; i < g.values.size(); ++i) {
        if (fp::is_zero(g.values[i])) continue;
        auto eg = fp::ext_gcd(g.values[i], m, p);
        c = fp::rem(fp::mul(f.values[i], eg.s, p), m, p);
        fp::trim(*c);
        break;
    }
    if (!c) return std::nullopt;
    for (size_t i = 0; i < g.values.size(); ++i) {
        fp::Poly lhs = f.values[i];
        fp::Poly rhs = fp::rem(fp::mul(*c, g.values[i], p), m, p);
        fp::trim(lhs);
        fp::trim(rhs);
        if (lhs != rhs) return std::nullopt;
    }
    return c;
}

fp::Poly theta_k_lift(const fp::Poly& P, long p) {
    const size_t w = P.size() - 1;
    fp::Poly out(w + p + 2, 0);
    for (size_t j = 0; j <= w; ++j) {
        out[j + p] = fp::reduce(out[j + p] + P[j], p);
        out[j + 1] = fp::reduce(out[j + 1] - P[j], p);
    }
    return out;
}

}  // namespace imt
