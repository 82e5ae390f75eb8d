#include "imt/iwasawa/group_ring.hpp"

#include <stdexcept>

#include "imt/error.hpp"

namespace imt {

namespace {

long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

mpz_class binom(long n, long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

// (1+X)^e as an exact integer polynomial
zp::Poly one_plus_x_pow(long e) {
    zp::Poly r(e + 1);
    for (long i = 0; i <= e; ++i) r[i] = binom(e, i);
    return r;
}

}  // namespace

long binomial_mod(long n, long k, long p) {
    if (k < 0 || k > n) return 0;
    mpz_class b = binom(n, k) % p;
    return b.get_si();
}

void lpoly_trim(LPoly& f) {
    while (!f.empty() && f.back().exact_zero()) f.pop_back();
}

LPoly lpoly_from_int(const FieldRef& field, const zp::Poly& f) {
    LPoly r;
    r.reserve(f.size());
    for (auto& c : f) r.push_back(LocalElem::from_int(field, c));
    return r;
}

LPoly lpoly_mul(const LPoly& a, const LPoly& b) {
    if (a.empty() || b.empty()) return {};
    LPoly r(a.size() + b.size() - 1, LocalElem::zero(a[0].field()));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].exact_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (!b[j].exact_zero()) r[i + j] += a[i] * b[j];
    }
    return r;
}

LPoly lpoly_rem_monic(const LPoly& a, const zp::Poly& b) {
    const long db = zp::degree(b);
    if (db < 0 || b[db] != 1) throw std::invalid_argument("lpoly_rem_monic: divisor must be monic");
    LPoly r = a;
    if (static_cast<long>(r.size()) <= db) return r;
    const auto& field = r[0].field();
    for (long i = static_cast<long>(r.size()) - 1; i >= db; --i) {
        if (r[i].exact_zero()) continue;
        LocalElem c = r[i];
        for (long j = 0; j < db; ++j)
            if (b[j] != 0) r[i - db + j] -= c.times_int(b[j]);
        r[i] = LocalElem::zero(field);
    }
    r.resize(db, LocalElem::zero(field));
    return r;
}

// ---------------------------------------------------------------- GroupRingPoly

GroupRingPoly::GroupRingPoly(FieldRef field, int n) : field_(std::move(field)), n_(n) {
    if (n < 0) throw std::invalid_argument("negative level");
    c_.assign(ipow(field_->ctx().p, n), LocalElem::zero(field_));
}

GroupRingPoly GroupRingPoly::from_group_basis(FieldRef field, int n, const std::vector<LocalElem>& a) {
    GroupRingPoly F(field, n);
    const long N = F.size();
    if (static_cast<long>(a.size()) != N) throw std::invalid_argument("from_group_basis: wrong length");
    // Horner in (1+X)
    std::vector<LocalElem>& P = F.c_;
    long deg = 0;
    P[0] = a[N - 1];
    for (long m = N - 2; m >= 0; --m) {
        for (long i = deg + 1; i >= 1; --i) P[i] += P[i - 1];
        ++deg;
        P[0] += a[m];
    }
    return F;
}

GroupRingPoly GroupRingPoly::from_poly(FieldRef field, int n, const LPoly& f) {
    GroupRingPoly F(field, n);
    LPoly r = lpoly_rem_monic(f, omega_poly(field->ctx().p, n));
    for (size_t i = 0; i < r.size() && static_cast<long>(i) < F.size(); ++i) F.c_[i] = r[i];
    return F;
}

GroupRingPoly GroupRingPoly::absorbed() const {
    GroupRingPoly r = *this;
    if (denom_exp_ == 0) return r;
    for (auto& c : r.c_) c = c.times_p_power(-denom_exp_);
    r.denom_exp_ = 0;
    return r;
}

GroupRingPoly& GroupRingPoly::operator+=(const GroupRingPoly& o) {
    if (o.n_ != n_) throw std::invalid_argument("GroupRingPoly: level mismatch");
    if (o.denom_exp_ != denom_exp_) {
        *this = absorbed();
        GroupRingPoly b = o.absorbed();
        for (long i = 0; i < size(); ++i) c_[i] += b.c_[i];
        return *this;
    }
    for (long i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
}

GroupRingPoly& GroupRingPoly::operator-=(const GroupRingPoly& o) { return *this += o.negated(); }

GroupRingPoly GroupRingPoly::negated() const {
    GroupRingPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

GroupRingPoly GroupRingPoly::scaled(const LocalElem& s) const {
    GroupRingPoly r = *this;
    for (auto& c : r.c_) c *= s;
    return r;
}

GroupRingPoly operator*(const GroupRingPoly& a, const GroupRingPoly& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("GroupRingPoly: level mismatch");
    auto ga = a.group_basis(), gb = b.group_basis();
    const long N = a.size();
    std::vector<LocalElem> prod(N, LocalElem::zero(a.field_));
    for (long i = 0; i < N; ++i) {
        if (ga[i].exact_zero()) continue;
        for (long j = 0; j < N; ++j) {
            if (gb[j].exact_zero()) continue;
            long k = i + j;
            if (k >= N) k -= N;
            prod[k] += ga[i] * gb[j];
        }
    }
    GroupRingPoly r = GroupRingPoly::from_group_basis(a.field_, a.n_, prod);
    r.denom_exp_ = a.denom_exp_ + b.denom_exp_;
    return r;
}

std::vector<LocalElem> GroupRingPoly::group_basis() const {
    const long N = size();
    std::vector<LocalElem> P(N, LocalElem::zero(field_));
    // Horner in X = Y - 1
    long deg = 0;
    P[0] = c_[N - 1];
    for (long i = N - 2; i >= 0; --i) {
        // P <- P * (Y - 1) + c_i
        for (long t = deg + 1; t >= 1; --t) P[t] = P[t - 1] - P[t];
        P[0] = -P[0];
        ++deg;
        P[0] += c_[i];
    }
    return P;
}

GroupRingPoly GroupRingPoly::project_to(int m) const {
    if (m > n_) throw std::invalid_argument("project_to: target level above source");
    auto a = group_basis();
    const long Nm = ipow(p(), m);
    std::vector<LocalElem> b(Nm, LocalElem::zero(field_));
    for (long j = 0; j < size(); ++j) b[j % Nm] += a[j];
    GroupRingPoly r = from_group_basis(field_, m, b);
    r.denom_exp_ = denom_exp_;
    return r;
}

GroupRingPoly GroupRingPoly::norm_to(int m) const {
    if (m < n_) throw std::invalid_argument("norm_to: target level below source");
    auto a = group_basis();
    const long Nm = ipow(p(), m), N = size();
    std::vector<LocalElem> b(Nm, LocalElem::zero(field_));
    for (long j = 0; j < N; ++j)
        for (long t = j; t < Nm; t += N) b[t] = a[j];
    GroupRingPoly r = from_group_basis(field_, m, b);
    r.denom_exp_ = denom_exp_;
    return r;
}

GroupRingPoly GroupRingPoly::change_generator(long c) const {
    if (c % p() == 0) throw std::invalid_argument("change_generator needs a unit exponent");
    auto a = group_basis();
    const long N = size();
    std::vector<LocalElem> b(N, LocalElem::zero(field_));
    long cc = ((c % N) + N) % N;
    for (long j = 0; j < N; ++j) b[(j * cc) % N] += a[j];
    GroupRingPoly r = from_group_basis(field_, n_, b);
    r.denom_exp_ = denom_exp_;
    return r;
}

GroupRingPoly GroupRingPoly::tw(long i, const LocalElem& u) const {
    LocalElem ui = u.lift_to(field_).pow(i);
    LocalElem a0 = ui - LocalElem::one(field_);
    const long N = size();
    GroupRingPoly r(field_, n_);
    r.denom_exp_ = denom_exp_;
    auto& P = r.c_;
    long deg = 0;
    P[0] = c_[N - 1];
    for (long k = N - 2; k >= 0; --k) {
        // P <- P * (a0 + ui X) + c_k
        for (long t = deg + 1; t >= 1; --t) P[t] = P[t] * a0 + P[t - 1] * ui;
        P[0] = P[0] * a0;
        ++deg;
        P[0] += c_[k];
    }
    return r;
}

LPoly GroupRingPoly::as_poly() const { return c_; }

// ---------------------------------------------------------------- invariants

IwasawaInvariants mu_lambda(const LPoly& f, int denom_exp) {
    bool all_exact_zero = true;
    long best = 0;
    bool have = false;
    for (auto& c : f) {
        if (c.exact_zero()) continue;
        all_exact_zero = false;
        long lb = c.valuation_lower_bound();
        if (!have || lb < best) {
            best = lb;
            have = true;
        }
    }
    if (all_exact_zero) return {};
    // the minimum must be attained by a certified coefficient, and no earlier
    // coefficient may be undetermined at that level
    for (size_t i = 0; i < f.size(); ++i) {
        const auto& c = f[i];
        if (c.exact_zero()) continue;
        if (c.valuation_lower_bound() > best) continue;
        if (c.is_zero()) throw PrecisionExhausted("mu/lambda: coefficient " + std::to_string(i) + " undetermined at the minimal valuation");
        long v = *c.valuation();
        if (v != best) throw PrecisionExhausted("mu/lambda: inconsistent valuation bound");
        long e = c.field()->ram();
        return {best - e * denom_exp, static_cast<long>(i)};
    }
    throw PrecisionExhausted("mu/lambda: no certified coefficient");
}

IwasawaInvariants mu_lambda(const GroupRingPoly& F) { return mu_lambda(F.coeffs(), F.denom_exp()); }

// ---------------------------------------------------------------- cyclotomic data

zp::Poly omega_poly(long p, int n) {
    zp::Poly r = one_plus_x_pow(ipow(p, n));
    r[0] -= 1;
    return r;
}

zp::Poly phi_poly(long p, int n) {
    if (n == 0) return zp::Poly{0, 1};
    const long step = ipow(p, n - 1);
    zp::Poly r((p - 1) * step + 1, 0);
    for (long i = 0; i < p; ++i) {
        zp::Poly t = one_plus_x_pow(i * step);
        for (size_t k = 0; k < t.size(); ++k) r[k] += t[k];
    }
    return r;
}

zp::Poly tw_int(const zp::Poly& f, long i, const PrimeContext& ctx) {
    mpz_class mod = ctx.modulus(), u = 1 + ctx.p, ui;
    if (i >= 0) {
        mpz_powm_ui(ui.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(i), mod.get_mpz_t());
    } else {
        mpz_invert(ui.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t());
        mpz_powm_ui(ui.get_mpz_t(), ui.get_mpz_t(), static_cast<unsigned long>(-i), mod.get_mpz_t());
    }
    zp::Poly lin{ui - 1, ui};
    zp::Poly out;
    for (long k = static_cast<long>(f.size()) - 1; k >= 0; --k) {
        out = zp::mul(out, lin, mod);
        out = zp::add(out, zp::Poly{f[k]}, mod);
    }
    return out;
}

PhiProducts phi_products(const PrimeContext& ctx, int n, int h) {
    mpz_class mod = ctx.modulus();
    auto phi_nh = [&](int m) {
        zp::Poly base = phi_poly(ctx.p, m), acc{1};
        for (int j = 0; j < h; ++j) acc = zp::mul(acc, tw_int(base, -j, ctx), mod);
        return acc;
    };
    PhiProducts out{phi_nh(n), {1}, {1}};
    for (int m = 1; m <= n; ++m) {
        zp::Poly t = phi_nh(m);
        if (m % 2 == 0)
            out.plus = zp::mul(out.plus, t, mod);
        else
            out.minus = zp::mul(out.minus, t, mod);
    }
    return out;
}

zp::Poly omega_product(const PrimeContext& ctx, int n, int h) {
    mpz_class mod = ctx.modulus();
    zp::Poly base = omega_poly(ctx.p, n), acc{1};
    for (int j = 0; j < h; ++j) acc = zp::mul(acc, tw_int(base, -j, ctx), mod);
    return acc;
}

long q_n(long p, int n) {
    long q = 0;
    // p^(n-1) - p^(n-2) + ... down to p^1 (n odd) or p^0 (n even)
    for (int e = n - 1, sign = 1; e >= (n % 2 == 0 ? 0 : 1); --e, sign = -sign) q += sign * ipow(p, e);
    return n < 2 ? 0 : q;
}

namespace {

// resultant of monic integer A with B over the local field, by Euclid
LocalElem resultant(const zp::Poly& A, LPoly B, const FieldRef& field) {
    LPoly a = lpoly_from_int(field, A);
    LPoly b = std::move(B);
    LocalElem acc = LocalElem::one(field);
    auto deg = [](LPoly& f) {
        while (!f.empty() && f.back().is_zero()) f.pop_back();
        return static_cast<long>(f.size()) - 1;
    };
    long da = deg(a), db = deg(b);
    if (db < 0) return LocalElem::zero(field);
    while (true) {
        if (db == 0) return acc * b[0].pow(da);
        // r = a mod b
        LocalElem lead_inv = b[db].inverse();
        LPoly r = a;
        for (long i = da; i >= db; --i) {
            if (r[i].is_zero()) continue;
            LocalElem c = r[i] * lead_inv;
            for (long j = 0; j <= db; ++j) r[i - db + j] -= c * b[j];
        }
        r.resize(db);
        long dr = deg(r);
        if (dr < 0) return LocalElem::zero(field);
        // Res(a, b) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
        acc *= b[db].pow(da - dr);
        if ((da * db) % 2 == 1) acc = -acc;
        a = std::move(b);
        b = std::move(r);
        da = db;
        db = dr;
    }
}

}  // namespace

ZetaValuation eval_val_at_zeta(const GroupRingPoly& F, int n) {
    if (n < 1) throw std::invalid_argument("eval_val_at_zeta needs n >= 1");
    const long p = F.p();
    const FieldRef& L = F.field();
    zp::Poly Phi = phi_poly(p, n);
    const long phi = zp::degree(Phi);
    LPoly G = lpoly_rem_monic(F.absorbed().as_poly(), Phi);
    ZetaValuation out;
    LocalElem res = resultant(Phi, G, L);
    auto v = res.valuation();
    if (!v) throw PrecisionExhausted("F vanishes at zeta - 1");
    out.direct = mpq_class(*v, static_cast<long>(L->ram()) * phi);
    out.direct.canonicalize();
    auto inv = mu_lambda(F);
    if (inv.mu) {
        mpq_class lam_bound(phi, L->ram());
        lam_bound.canonicalize();
        out.hypothesis_holds = mpq_class(*inv.lambda) < lam_bound;
        if (out.hypothesis_holds) {
            mpq_class cf = mpq_class(*inv.mu, L->ram()) + mpq_class(*inv.lambda, phi);
            cf.canonicalize();
            out.closed_form = cf;
        }
    }
    return out;
}

}  // namespace imt
