#include "imt/padic/local.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "imt/error.hpp"

namespace imt {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::EigenSplitFailed: return "EigenSplitFailed";
        case ErrorKind::ZeroReduction: return "ZeroReduction";
        case ErrorKind::NonIntegral: return "NonIntegral";
        case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
        case ErrorKind::NotInPsiZero: return "NotInPsiZero";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::Network: return "Network";
    }
    return "Error";
}

PrimeContext::PrimeContext(long prime, int precision) : p(prime), M(precision) {
    mpz_class pz = p;
    if (p < 3 || mpz_probab_prime_p(pz.get_mpz_t(), 30) == 0)
        throw OutOfRange("p must be an odd prime, got " + std::to_string(p));
    if (M < 1) throw OutOfRange("precision must be positive");
}

mpz_class PrimeContext::modulus() const { return power(M); }

mpz_class PrimeContext::power(int e) const {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::max(e, 0)));
    return r;
}

// ---------------------------------------------------------------- LocalField

LocalField::LocalField(const PrimeContext& ctx, Certified data)
    : ctx_(ctx), g_(std::move(data.g)), hbar_(std::move(data.hbar)), e_(data.e), v0_(data.v0) {
    f_ = fp::degree(hbar_);
    hlift_ = data.hlift.empty() ? zp::from_fp(hbar_) : std::move(data.hlift);
    if (f_ * e_ != degree()) throw std::logic_error("LocalField: degree mismatch");
}

FieldRef LocalField::rational(const PrimeContext& ctx) {
    return std::make_shared<const LocalField>(ctx, Certified{zp::Poly{0, 1}, fp::Poly{0, 1}, {}, 1, 1});
}

bool LocalField::same(const LocalField& other) const {
    return ctx_.p == other.ctx_.p && ctx_.M == other.ctx_.M && g_ == other.g_;
}

std::string LocalField::describe() const {
    std::ostringstream os;
    os << "Q_" << ctx_.p << "[y]/(";
    for (int i = degree(); i >= 0; --i) {
        os << g_[i].get_str();
        if (i) os << "*y^" << i << " + ";
    }
    os << "), e=" << e_ << ", f=" << f_;
    return os.str();
}

// ---------------------------------------------------------------- helpers

namespace {

void check_same(const FieldRef& a, const FieldRef& b) {
    if (a.get() != b.get() && !a->same(*b)) throw std::invalid_argument("LocalElem: mixing different fields");
}

// expansion of c in powers of hlift, digits of degree < f
std::vector<zp::Poly> hadic_digits(const zp::Poly& c, const LocalField& L) {
    std::vector<zp::Poly> out;
    zp::Poly rest = c;
    zp::trim(rest);
    for (int i = 0; i < L.ram(); ++i) {
        auto [q, r] = zp::divmod_monic(rest, L.residual_lift(), mpz_class(0));
        out.push_back(r);
        rest = q;
    }
    return out;
}

long content_ord(const std::vector<mpz_class>& c, long p, long cap) {
    long v = cap;
    for (auto& x : c) v = std::min(v, zp::ord_p(x, p, cap));
    return v;
}

mpz_class bareiss_det(std::vector<std::vector<mpz_class>> a) {
    const int n = static_cast<int>(a.size());
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            int r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::vector<std::vector<mpz_class>> mult_matrix(const std::vector<mpz_class>& c, const LocalField& L) {
    const int d = L.degree();
    std::vector<std::vector<mpz_class>> m(d, std::vector<mpz_class>(d, 0));
    zp::Poly col = c;
    zp::trim(col);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) m[i][j] = i < static_cast<int>(col.size()) ? col[i] : mpz_class(0);
        col.insert(col.begin(), mpz_class(0));
        col = zp::rem_monic(col, L.defining(), mpz_class(0));
    }
    return m;
}

// exact solve over Q
std::vector<mpq_class> solve_q(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
    const int n = static_cast<int>(a.size());
    for (int k = 0; k < n; ++k) {
        int r = k;
        while (r < n && a[r][k] == 0) ++r;
        if (r == n) throw SingularSystem("local inverse of a singular element");
        std::swap(a[k], a[r]);
        std::swap(b[k], b[r]);
        for (int i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            mpq_class f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    for (int i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

}  // namespace

// ---------------------------------------------------------------- LocalElem

LocalElem LocalElem::zero(FieldRef field) {
    LocalElem x;
    x.field_ = std::move(field);
    x.c_.assign(x.field_->degree(), 0);
    x.rel_ = x.field_->ctx().M;
    x.exact_zero_ = true;
    return x;
}

LocalElem LocalElem::one(FieldRef field) { return from_int(std::move(field), 1); }

LocalElem LocalElem::from_int(FieldRef field, const mpz_class& n) { return from_rational(std::move(field), mpq_class(n)); }

LocalElem LocalElem::from_rational(FieldRef field, const mpq_class& q) {
    if (q == 0) return zero(std::move(field));
    const auto& ctx = field->ctx();
    mpz_class num = q.get_num(), den = q.get_den();
    int shift = 0;
    mpz_class pp = ctx.p;
    while (mpz_divisible_p(num.get_mpz_t(), pp.get_mpz_t())) {
        num /= pp;
        ++shift;
    }
    while (mpz_divisible_p(den.get_mpz_t(), pp.get_mpz_t())) {
        den /= pp;
        --shift;
    }
    mpz_class mod = ctx.modulus(), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    std::vector<mpz_class> c(field->degree(), 0);
    c[0] = num * inv;
    mpz_fdiv_r(c[0].get_mpz_t(), c[0].get_mpz_t(), mod.get_mpz_t());
    return from_coeffs(std::move(field), std::move(c), shift);
}

LocalElem LocalElem::from_coeffs(FieldRef field, std::vector<mpz_class> coeffs, int shift) {
    LocalElem x;
    x.field_ = std::move(field);
    const int d = x.field_->degree();
    zp::Poly c = std::move(coeffs);
    if (static_cast<int>(c.size()) > d) c = zp::rem_monic(c, x.field_->defining(), mpz_class(0));
    c.resize(d, 0);
    x.c_ = std::move(c);
    x.shift_ = shift;
    x.rel_ = x.field_->ctx().M;
    x.exact_zero_ = false;
    x.normalize();
    return x;
}

LocalElem LocalElem::from_poly(FieldRef field, const std::vector<mpq_class>& coeffs) {
    LocalElem acc = zero(field);
    LocalElem y = generator(field);
    LocalElem pw = one(field);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) acc += pw * from_rational(field, coeffs[i]);
        if (i + 1 < coeffs.size()) pw *= y;
    }
    return acc;
}

LocalElem LocalElem::generator(FieldRef field) {
    std::vector<mpz_class> c(field->degree(), 0);
    if (field->degree() == 1) {
        // y is a root of g = y + g0
        c[0] = -field->defining()[0];
    } else {
        c[1] = 1;
    }
    return from_coeffs(std::move(field), std::move(c));
}

LocalElem LocalElem::uniformizer(FieldRef field) {
    const int e = field->ram();
    if (e == 1) return from_int(field, field->ctx().p);
    // p^a * h(y)^b with a e + b v0 = 1, 0 <= b < e
    const int v0 = field->residual_lift_val();
    int b = 0;
    while ((1 - b * v0) % e != 0) ++b;
    int a = (1 - b * v0) / e;
    LocalElem h = from_coeffs(field, field->residual_lift());
    return h.pow(b).times_p_power(a);
}

void LocalElem::normalize() {
    if (exact_zero_) return;
    const long p = field_->ctx().p;
    mpz_class mod = field_->ctx().power(rel_);
    for (auto& v : c_) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
    long w = content_ord(c_, p, rel_);
    if (w == 0) return;
    if (w >= rel_) {
        for (auto& v : c_) v = 0;
        shift_ += rel_;
        rel_ = 0;
        return;
    }
    mpz_class pw = field_->ctx().power(static_cast<int>(w));
    for (auto& v : c_) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), pw.get_mpz_t());
    shift_ += static_cast<int>(w);
    rel_ -= static_cast<int>(w);
}

bool LocalElem::is_zero() const { return exact_zero_ || rel_ == 0; }

int LocalElem::abs_prec() const { return exact_zero_ ? 1 << 28 : shift_ + rel_; }

std::optional<long> LocalElem::valuation() const {
    if (exact_zero_) return std::nullopt;
    const auto& L = *field_;
    const long e = L.ram();
    if (rel_ == 0) throw PrecisionExhausted("valuation of an element known only to be divisible by p^" + std::to_string(shift_));
    auto digits = hadic_digits(c_, L);
    long best = -1, unknown = -1;
    for (int i = 0; i < static_cast<int>(digits.size()); ++i) {
        long o = content_ord(digits[i], L.ctx().p, rel_);
        if (o >= rel_) {
            long bound = e * rel_ + i * L.residual_lift_val();
            unknown = unknown < 0 ? bound : std::min(unknown, bound);
        } else {
            long v = e * o + static_cast<long>(i) * L.residual_lift_val();
            best = best < 0 ? v : std::min(best, v);
        }
    }
    if (best < 0 || (unknown >= 0 && unknown < best))
        throw PrecisionExhausted("valuation not determined at relative precision " + std::to_string(rel_));
    return best + e * shift_;
}

long LocalElem::valuation_lower_bound() const {
    if (exact_zero_) return 1L << 40;
    const auto& L = *field_;
    const long e = L.ram();
    if (rel_ == 0) return e * shift_;
    auto digits = hadic_digits(c_, L);
    long best = -1;
    for (int i = 0; i < static_cast<int>(digits.size()); ++i) {
        long o = content_ord(digits[i], L.ctx().p, rel_);
        long v = e * o + static_cast<long>(i) * L.residual_lift_val();
        best = best < 0 ? v : std::min(best, v);
    }
    return best + e * shift_;
}

std::optional<long> LocalElem::valuation_by_norm() const {
    if (exact_zero_) return std::nullopt;
    if (rel_ == 0) throw PrecisionExhausted("norm valuation of an unknown element");
    const auto& L = *field_;
    mpz_class det = bareiss_det(mult_matrix(c_, L));
    long o = zp::ord_p(det, L.ctx().p, rel_);
    if (o >= rel_) throw PrecisionExhausted("norm valuation not determined");
    // ord_p N(x) = f * ord_varpi(x)
    return o / L.res_degree() + static_cast<long>(L.ram()) * shift_;
}

mpq_class LocalElem::ord_p() const {
    auto v = valuation();
    if (!v) throw std::domain_error("ord_p of zero");
    mpq_class r(*v, field_->ram());
    r.canonicalize();
    return r;
}

LocalElem LocalElem::operator-() const {
    LocalElem r = *this;
    if (exact_zero_) return r;
    mpz_class mod = field_->ctx().power(rel_);
    for (auto& v : r.c_) {
        v = -v;
        mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
    }
    return r;
}

LocalElem& LocalElem::operator+=(const LocalElem& o) {
    if (o.exact_zero_) return *this;
    if (exact_zero_) {
        *this = o;
        return *this;
    }
    check_same(field_, o.field_);
    const int M = field_->ctx().M;
    int s = std::min(shift_, o.shift_);
    int r = std::min({rel_ + shift_ - s, o.rel_ + o.shift_ - s, M});
    mpz_class ua = field_->ctx().power(shift_ - s), ub = field_->ctx().power(o.shift_ - s);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] * ua + o.c_[i] * ub;
    shift_ = s;
    rel_ = r;
    normalize();
    return *this;
}

LocalElem& LocalElem::operator-=(const LocalElem& o) { return *this += -o; }

LocalElem& LocalElem::operator*=(const LocalElem& o) {
    if (exact_zero_) return *this;
    if (o.exact_zero_) {
        *this = o;
        return *this;
    }
    check_same(field_, o.field_);
    int r = std::min(rel_, o.rel_);
    mpz_class mod = field_->ctx().power(r);
    zp::Poly prod = zp::mul(c_, o.c_, mod);
    prod = zp::rem_monic(prod, field_->defining(), mod);
    prod.resize(field_->degree(), 0);
    c_ = std::move(prod);
    shift_ += o.shift_;
    rel_ = r;
    normalize();
    return *this;
}

LocalElem LocalElem::times_int(const mpz_class& n) const { return *this * from_int(field_, n); }

LocalElem LocalElem::times_p_power(int e) const {
    LocalElem r = *this;
    if (!exact_zero_) r.shift_ += e;
    return r;
}

LocalElem LocalElem::inverse() const {
    if (exact_zero_ || rel_ == 0) throw PrecisionExhausted("inverse of an element indistinguishable from zero");
    const auto& L = *field_;
    const int d = L.degree();
    auto m = mult_matrix(c_, L);
    mpz_class det = bareiss_det(m);
    long t = zp::ord_p(det, L.ctx().p, rel_);
    if (t >= rel_) throw PrecisionExhausted("inverse: norm not determined");
    std::vector<std::vector<mpq_class>> a(d, std::vector<mpq_class>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a[i][j] = m[i][j];
    std::vector<mpq_class> b(d, 0);
    b[0] = 1;
    auto z = solve_q(std::move(a), std::move(b));
    LocalElem r = d == 1 ? from_rational(field_, z[0]) : from_poly(field_, z);
    r.shift_ -= shift_;
    if (!r.exact_zero_) {
        r.rel_ = std::max(0, std::min(r.rel_, rel_ - static_cast<int>(t)));
        r.normalize();
    }
    return r;
}

LocalElem LocalElem::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    LocalElem r = one(field_), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

fp::Poly LocalElem::residue() const {
    const auto& L = *field_;
    const long p = L.ctx().p;
    if (exact_zero_) return {};
    auto v = valuation();
    if (*v < 0) throw NonIntegral("residue of a non-integral element");
    if (*v > 0) return {};
    if (shift_ > 0 || rel_ == 0) return {};
    if (shift_ == 0) {
        fp::Poly r = zp::to_fp(c_, p);
        return fp::rem(r, L.residual(), p);
    }
    // a unit outside Z_p[y]: search the residue field for r with x - r(y) in the maximal ideal
    const int f = L.res_degree();
    long q = 1;
    for (int i = 0; i < f; ++i) q *= p;
    if (q > 200000) throw PrecisionExhausted("residue field too large for the residue search");
    for (long code = 1; code < q; ++code) {
        fp::Poly r(f, 0);
        for (long c = code, i = 0; i < f; ++i, c /= p) r[i] = c % p;
        std::vector<mpz_class> coeffs(r.begin(), r.end());
        LocalElem d = *this - from_coeffs(field_, coeffs);
        if (d.exact_zero() || d.valuation_lower_bound() > 0) {
            fp::trim(r);
            return r;
        }
    }
    throw PrecisionExhausted("residue not determined");
}

std::vector<mpq_class> LocalElem::to_rationals() const {
    std::vector<mpq_class> out(field_->degree(), 0);
    if (exact_zero_) return out;
    mpq_class scale = 1;
    mpz_class pw = field_->ctx().power(std::abs(shift_));
    scale = shift_ >= 0 ? mpq_class(pw) : mpq_class(1, 1) / mpq_class(pw);
    for (size_t i = 0; i < c_.size(); ++i) out[i] = mpq_class(c_[i]) * scale;
    return out;
}

LocalElem LocalElem::with_rel_prec(int rel) const {
    LocalElem r = *this;
    if (exact_zero_ || rel >= rel_) return r;
    r.rel_ = std::max(rel, 0);
    r.normalize();
    return r;
}

LocalElem LocalElem::lift_to(FieldRef field) const {
    if (field_->degree() != 1) {
        check_same(field_, field);
        return *this;
    }
    if (exact_zero_) return zero(std::move(field));
    std::vector<mpz_class> c(field->degree(), 0);
    c[0] = c_[0];
    LocalElem r = from_coeffs(field, std::move(c), shift_);
    r.rel_ = std::min(r.rel_, rel_);
    r.normalize();
    return r;
}

bool LocalElem::congruent(const LocalElem& o, long bound) const {
    LocalElem d = *this - o;
    return d.valuation_lower_bound() >= bound;
}

std::string LocalElem::str() const {
    if (exact_zero_) return "0";
    std::ostringstream os;
    os << "p^" << shift_ << "*(";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << " + ";
        os << c_[i].get_str() << "*y^" << i;
    }
    os << ") + O(p^" << abs_prec() << ")";
    return os.str();
}

// ---------------------------------------------------------------- factoring
//
// Blocks g = psi^e mod p are resolved recursively. Either a lift h of psi
// certifies g directly (single Newton segment of slope coprime to e), or some
// element of Q_p[y]/(g) exposes a finer structure: distinct slopes or distinct
// residues split the algebra through an idempotent, and otherwise a unit
// built from psi(y) becomes the new generator.

namespace {

constexpr int kSlack = 30;
constexpr int kMaxDepth = 12;

struct Found {
    LocalField::Certified cert;
    std::vector<mpq_class> root;  // image of the block generator, as a polynomial in the certified one
};

std::optional<LocalField::Certified> certify_block(const zp::Poly& block, const fp::Poly& hbar, int e, const zp::Poly& base,
                                                   const PrimeContext& ctx) {
    if (e == 1) return LocalField::Certified{block, hbar, {}, 1, 1};
    const long p = ctx.p;
    for (long r = 0; r < p; ++r) {
        zp::Poly h = base;
        h[0] += r * p;
        std::vector<zp::Poly> digits;
        zp::Poly rest = block;
        for (int i = 0; i <= e; ++i) {
            auto [q, rr] = zp::divmod_monic(rest, h, mpz_class(0));
            digits.push_back(rr);
            rest = q;
        }
        long v0 = content_ord(digits[0], p, ctx.M);
        if (v0 >= ctx.M) continue;
        if (std::gcd(v0, static_cast<long>(e)) != 1) continue;
        bool ok = digits[e] == zp::Poly{1};
        for (int i = 1; i < e && ok; ++i) {
            long vi = content_ord(digits[i], p, ctx.M);
            // on or above the segment from (0, v0) to (e, 0)
            if (vi * e < v0 * (e - i)) ok = false;
        }
        if (ok) return LocalField::Certified{block, hbar, h, e, static_cast<int>(v0)};
    }
    return std::nullopt;
}

// Tr(y^i), i < deg g, by Newton's identities
std::vector<mpz_class> power_traces(const zp::Poly& g) {
    const int n = zp::degree(g);
    std::vector<mpz_class> s(n, 0);
    s[0] = n;
    for (int k = 1; k < n; ++k) {
        mpz_class acc = mpz_class(k) * g[n - k];
        for (int i = 1; i < k; ++i) acc += g[n - i] * s[k - i];
        s[k] = -acc;
    }
    return s;
}

mpq_class trace(const LocalElem& a, const std::vector<mpz_class>& T) {
    if (a.exact_zero()) return 0;
    auto c = a.to_rationals();
    mpq_class t = 0;
    for (size_t i = 0; i < c.size(); ++i) t += c[i] * T[i];
    return t;
}

// an approximately p-integral rational as an integer mod p^M
mpz_class to_zp(const mpq_class& q, const PrimeContext& ctx) {
    mpz_class num = q.get_num(), den = q.get_den(), pp = ctx.p;
    int d = 0;
    while (mpz_divisible_p(den.get_mpz_t(), pp.get_mpz_t())) {
        den /= pp;
        ++d;
    }
    mpz_class mod = ctx.power(ctx.M + d), inv, r;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    r = num * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    mpz_fdiv_q(r.get_mpz_t(), r.get_mpz_t(), ctx.power(d).get_mpz_t());
    return r;
}

// a monic polynomial known modulo p^prec
struct Approx {
    zp::Poly f;
    int prec;
};

long ord_factorial(long p, int m) {
    long v = 0;
    for (long q = p; q <= m; q *= p) v += m / q;
    return v;
}

// monic polynomial with the given power sums s_1..s_m, each known mod p^prec
Approx poly_from_power_sums(const std::vector<mpq_class>& s, int prec, const PrimeContext& ctx) {
    const int m = static_cast<int>(s.size());
    std::vector<mpq_class> el(m + 1, 0);
    el[0] = 1;
    for (int k = 1; k <= m; ++k) {
        mpq_class acc = 0;
        for (int i = 1; i <= k; ++i) acc += ((i % 2) ? 1 : -1) * el[k - i] * s[i - 1];
        el[k] = acc / k;
    }
    Approx out{zp::Poly(m + 1, 0), std::min(ctx.M, static_cast<int>(prec - ord_factorial(ctx.p, m)))};
    if (out.prec < 1) throw PrecisionExhausted("characteristic polynomial not determined");
    mpz_class mod = ctx.power(out.prec);
    for (int k = 0; k <= m; ++k) {
        out.f[m - k] = to_zp((k % 2 ? -1 : 1) * el[k], ctx);
        mpz_fdiv_r(out.f[m - k].get_mpz_t(), out.f[m - k].get_mpz_t(), mod.get_mpz_t());
    }
    out.f[m] = 1;
    return out;
}

Approx charpoly(const LocalElem& a, const std::vector<mpz_class>& T, int n, const PrimeContext& ctx) {
    std::vector<mpq_class> s;
    int prec = ctx.M;
    LocalElem pw = a;
    for (int k = 1; k <= n; ++k) {
        s.push_back(trace(pw, T));
        prec = std::min(prec, pw.abs_prec());
        if (k < n) pw *= a;
    }
    return poly_from_power_sums(s, prec, ctx);
}

LocalElem eval_at(const zp::Poly& f, const LocalElem& x) {
    LocalElem acc = LocalElem::zero(x.field());
    for (int i = zp::degree(f); i >= 0; --i) acc = acc * x + LocalElem::from_int(x.field(), f[i]);
    return acc;
}

struct Slope {
    long num;
    long den;
    int length;
};

// segments of the lower Newton polygon of a monic polynomial, steepest first
std::vector<Slope> newton_segments(const zp::Poly& f, const PrimeContext& ctx) {
    const int n = zp::degree(f);
    std::vector<long> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = zp::ord_p(f[i], ctx.p, ctx.M);
    std::vector<Slope> out;
    int i = 0;
    while (i < n) {
        int best = i + 1;
        for (int j = i + 2; j <= n; ++j)
            if ((v[j] - v[i]) * (best - i) <= (v[best] - v[i]) * (j - i)) best = j;
        long drop = v[i] - v[best], run = best - i;
        long g = std::gcd(drop, run);
        out.push_back({drop / g, run / g, static_cast<int>(run)});
        i = best;
    }
    return out;
}

std::vector<Found> factor_rec(const zp::Poly& G, const PrimeContext& ctx, int floor, int depth);

std::vector<fp::Poly> factor_blocks(const std::vector<fp::Factor>& facs, long p) {
    std::vector<fp::Poly> blocks;
    for (auto& fc : facs) {
        fp::Poly b{1};
        for (int i = 0; i < fc.mult; ++i) b = fp::mul(b, fc.poly, p);
        blocks.push_back(b);
    }
    return blocks;
}

PrimeContext reduced_context(const PrimeContext& ctx, int prec, int floor) {
    if (prec < floor + 2) throw PrecisionExhausted("local factorization lost too much precision (" + std::to_string(prec) + " digits left)");
    return PrimeContext(ctx.p, std::min(prec, ctx.M));
}

// Split the algebra along the first residual factor of the characteristic
// polynomial of u, which must have at least two coprime residual factors.
std::vector<Found> split_by(const zp::Poly& g, const LocalElem& u, const std::vector<mpz_class>& T, const PrimeContext& ctx,
                            int floor, int depth) {
    const long p = ctx.p;
    const int n = zp::degree(g);
    Approx chu = charpoly(u, T, n, ctx);
    auto blocks = factor_blocks(fp::factor(zp::to_fp(chu.f, p), p), p);
    if (blocks.size() < 2) throw std::logic_error("split_by: nothing to split");
    fp::Poly rest_bar{1};
    for (size_t j = 1; j < blocks.size(); ++j) rest_bar = fp::mul(rest_bar, blocks[j], p);
    zp::Poly first = zp::from_fp(blocks[0]), rest = zp::from_fp(rest_bar);
    zp::hensel_lift(chu.f, first, rest, p, chu.prec);
    // t * rest = 1 mod (first, p) and = 0 mod rest: an idempotent modulo p
    auto eg = fp::ext_gcd(blocks[0], rest_bar, p);
    LocalElem idem = eval_at(zp::mul(zp::from_fp(eg.t), rest, ctx.power(chu.prec)), u);
    for (int i = 0; (1 << i) < 2 * ctx.M; ++i) {
        LocalElem sq = idem * idem;
        idem = sq.times_int(3) - sq * idem.times_int(2);
    }
    // the rank is a small integer known to the precision of the trace
    mpz_class rank = to_zp(trace(idem, T), ctx), low = ctx.power(std::min(8, idem.abs_prec()));
    mpz_fdiv_r(rank.get_mpz_t(), rank.get_mpz_t(), low.get_mpz_t());
    if (rank <= 0 || rank >= n) throw PrecisionExhausted("local splitting produced a trivial idempotent");
    const int m = static_cast<int>(rank.get_si());
    std::vector<mpq_class> s;
    int prec = ctx.M;
    LocalElem x = LocalElem::generator(u.field());
    LocalElem pw = idem * x;
    for (int k = 1; k <= m; ++k) {
        s.push_back(trace(pw, T));
        prec = std::min(prec, pw.abs_prec());
        if (k < m) pw *= x;
    }
    Approx g1 = poly_from_power_sums(s, prec, ctx);
    PrimeContext sub = reduced_context(ctx, g1.prec, floor);
    auto [g2, rem] = zp::divmod_monic(zp::reduce(g, sub.modulus()), g1.f, sub.modulus());
    if (content_ord(rem, p, sub.M) < sub.M) throw PrecisionExhausted("local splitting is inconsistent");
    auto out = factor_rec(g1.f, sub, floor, depth + 1);
    auto more = factor_rec(g2, sub, floor, depth + 1);
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

// coordinates d with x = sum d_i c^i when c generates the algebra
std::optional<std::pair<std::vector<mpq_class>, int>> express_in(const LocalElem& x, const LocalElem& c, int n, const PrimeContext& ctx) {
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n + 1));
    LocalElem pw = LocalElem::one(c.field());
    for (int j = 0; j < n; ++j) {
        auto col = pw.to_rationals();
        for (int i = 0; i < n; ++i) a[i][j] = col[i];
        pw *= c;
    }
    auto rhs = x.to_rationals();
    for (int i = 0; i < n; ++i) a[i][n] = rhs[i];
    long det_ord = 0;
    for (int k = 0; k < n; ++k) {
        int r = -1;
        long best = 0;
        for (int i = k; i < n; ++i) {
            if (a[i][k] == 0) continue;
            long o = zp::ord_p(a[i][k].get_num(), ctx.p, 1 << 20) - zp::ord_p(a[i][k].get_den(), ctx.p, 1 << 20);
            if (r < 0 || o < best) r = i, best = o;
        }
        if (r < 0) return std::nullopt;
        det_ord += best;
        std::swap(a[k], a[r]);
        for (int i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            mpq_class f = a[i][k] / a[k][k];
            for (int j = k; j <= n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    if (det_ord > kSlack / 3) return std::nullopt;
    std::vector<mpq_class> d(n);
    for (int i = 0; i < n; ++i) d[i] = a[i][n] / a[i][i];
    return std::pair{d, static_cast<int>(det_ord)};
}

std::vector<Found> resolve_block(const zp::Poly& g, const fp::Poly& psi, int e, const PrimeContext& ctx, int floor, int depth) {
    const long p = ctx.p;
    zp::Poly phi = zp::from_fp(psi);
    if (auto c = certify_block(g, psi, e, phi, ctx)) return {{*c, {0, 1}}};
    if (depth > kMaxDepth) throw PrecisionExhausted("local factorization did not terminate");
    const int n = zp::degree(g);
    // the algebra Q_p[y]/(g); only its ring operations are used
    auto A = std::make_shared<const LocalField>(ctx, LocalField::Certified{g, fp::Poly{0, 1}, {}, n, 1});
    const auto T = power_traces(g);
    const LocalElem x = LocalElem::generator(A);
    for (int round = 0; round < 4 * ctx.M; ++round) {
        if (round > 0)
            if (auto c = certify_block(g, psi, e, phi, ctx)) return {{*c, {0, 1}}};
        LocalElem z = eval_at(phi, x);
        Approx chi = charpoly(z, T, n, ctx);
        if (zp::ord_p(chi.f[0], p, chi.prec) >= chi.prec - 2) {
            // psi(y) vanishes on a component: move the lift by a small amount
            phi[0] += ctx.power(chi.prec / 3);
            continue;
        }
        auto segs = newton_segments(chi.f, PrimeContext(p, chi.prec));
        if (segs.size() > 1) {
            LocalElem u = z.pow(-segs[0].den).times_p_power(static_cast<int>(segs[0].num));
            return split_by(g, u, T, ctx, floor, depth);
        }
        const long a = segs[0].num, b = segs[0].den;
        LocalElem unit = z.pow(b).times_p_power(static_cast<int>(-a));
        Approx chu = charpoly(unit, T, n, ctx);
        auto facs = fp::factor(zp::to_fp(chu.f, p), p);
        if (facs.size() > 1) return split_by(g, unit, T, ctx, floor, depth);
        if (b == 1 && fp::degree(facs[0].poly) == 1) {
            // psi(y) is p^a times a rational residue: improve the lift and retry
            mpz_class r = fp::reduce(-facs[0].poly[0], p);
            phi[0] -= r * ctx.power(static_cast<int>(a));
            continue;
        }
        // a perturbed unit as the new generator
        for (int K : {6, 9, 12}) {
            LocalElem c = unit + x.times_p_power(K);
            auto d = express_in(x, c, n, ctx);
            if (!d) continue;
            Approx chc = charpoly(c, T, n, ctx);
            PrimeContext sub = reduced_context(ctx, chc.prec - d->second, floor);
            auto inner = factor_rec(zp::reduce(chc.f, sub.modulus()), sub, floor, depth + 1);
            for (auto& f : inner) {
                auto L = std::make_shared<const LocalField>(sub, f.cert);
                LocalElem rc = LocalElem::from_poly(L, f.root);
                LocalElem acc = LocalElem::zero(L), pw = LocalElem::one(L);
                for (int i = 0; i < n; ++i) {
                    if (d->first[i] != 0) acc += pw * LocalElem::from_rational(L, d->first[i]);
                    pw *= rc;
                }
                f.root = acc.to_rationals();
            }
            return inner;
        }
        break;
    }
    throw PrecisionExhausted("cannot resolve a ramified block of degree " + std::to_string(n));
}

std::vector<Found> factor_rec(const zp::Poly& G, const PrimeContext& ctx, int floor, int depth) {
    const long p = ctx.p;
    auto facs = fp::factor(zp::to_fp(G, p), p);
    auto blocks = factor_blocks(facs, p);
    auto lifted = facs.size() == 1 ? std::vector<zp::Poly>{zp::reduce(G, ctx.modulus())} : zp::hensel_lift_multi(G, blocks, p, ctx.M);
    std::vector<Found> out;
    for (size_t j = 0; j < facs.size(); ++j) {
        auto part = resolve_block(zp::reduce(lifted[j], ctx.modulus()), facs[j].poly, facs[j].mult, ctx, floor, depth);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace

std::vector<LocalFactor> local_factors(const zp::Poly& m, const PrimeContext& ctx) {
    if (zp::degree(m) < 1 || m.back() != 1) throw std::invalid_argument("local_factors: m must be monic of positive degree");
    // coordinates in a non-maximal order lose digits; retry with more working precision
    std::vector<Found> found;
    for (int slack = kSlack;; slack *= 2) {
        PrimeContext work(ctx.p, ctx.M + slack);
        try {
            found = factor_rec(zp::reduce(m, work.modulus()), work, ctx.M, 0);
            break;
        } catch (const PrecisionExhausted&) {
            if (slack >= 8 * kSlack) throw;
        }
    }
    std::vector<LocalFactor> out;
    for (auto& f : found) {
        f.cert.g = zp::reduce(f.cert.g, ctx.modulus());
        auto L = std::make_shared<const LocalField>(ctx, std::move(f.cert));
        out.push_back({L, LocalElem::from_poly(L, f.root)});
    }
    std::stable_sort(out.begin(), out.end(), [](const LocalFactor& x, const LocalFactor& y) {
        const auto& a = x.field;
        const auto& b = y.field;
        if (a->degree() != b->degree()) return a->degree() < b->degree();
        if (fp::less(a->residual(), b->residual())) return true;
        if (fp::less(b->residual(), a->residual())) return false;
        return a->ram() < b->ram();
    });
    return out;
}

std::vector<FieldRef> hensel_factor(const zp::Poly& m, const PrimeContext& ctx) {
    std::vector<FieldRef> out;
    for (auto& f : local_factors(m, ctx)) out.push_back(f.field);
    return out;
}

EmbeddedNumberField EmbeddedNumberField::make(const zp::Poly& minpoly, int prime_index, const PrimeContext& ctx) {
    auto factors = local_factors(minpoly, ctx);
    if (prime_index < 1 || prime_index > static_cast<int>(factors.size()))
        throw OutOfRange("prime index " + std::to_string(prime_index) + " out of range (" + std::to_string(factors.size()) + " primes)");
    EmbeddedNumberField K;
    K.minpoly = minpoly;
    K.prime_index = prime_index;
    K.local = factors[prime_index - 1].field;
    K.embed_root = factors[prime_index - 1].root;
    return K;
}

LocalElem EmbeddedNumberField::embed(const std::vector<mpq_class>& coeffs) const {
    LocalElem acc = LocalElem::zero(local);
    LocalElem pw = LocalElem::one(local);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) acc += pw * LocalElem::from_rational(local, coeffs[i]);
        if (i + 1 < coeffs.size()) pw *= embed_root;
    }
    return acc;
}

mpz_class teichmuller_int(long a, const PrimeContext& ctx) {
    if (a % ctx.p == 0) throw std::invalid_argument("teichmuller of a multiple of p");
    mpz_class mod = ctx.modulus(), x = a, pp = ctx.p;
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
    for (int i = 0; i < ctx.M; ++i) mpz_powm(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t(), mod.get_mpz_t());
    return x;
}

LocalElem teichmuller(long a, const PrimeContext& ctx) {
    return LocalElem::from_int(LocalField::rational(ctx), teichmuller_int(a, ctx));
}

HeckeRoots hecke_roots(const LocalElem& a_p, const LocalElem& eps_p, int k) {
    FieldRef L = a_p.field();
    const auto& ctx = L->ctx();
    const long e = L->ram();
    LocalElem c = eps_p.lift_to(L) * LocalElem::from_int(L, ctx.power(k - 1));
    const long vc = e * (k - 1);
    auto va = a_p.valuation();
    if (va && *va <= 0) throw HypothesisViolated("a_p is a unit: the form is ordinary at this prime");
    if (va && 2 * *va < vc) {
        // two slopes: the root of smaller valuation is a fixed point of a - c/x
        LocalElem alpha = a_p;
        const long gain = vc - 2 * *va;
        const long steps = (e * ctx.M + 2 * vc) / gain + 4;
        for (long s = 0; s < steps; ++s) alpha = a_p - c * alpha.inverse();
        LocalElem beta = a_p - alpha;
        return {L, alpha, beta, false};
    }
    if (L->degree() != 1) throw HypothesisViolated("equal-slope Hecke roots over a proper extension of Q_p are not supported");
    // rescale z = p^s w when the common slope s = (k-1)/2 is integral
    int s = (k - 1) % 2 == 0 ? (k - 1) / 2 : 0;
    LocalElem a_scaled = a_p.times_p_power(-s);
    LocalElem c_scaled = c.times_p_power(-2 * s);
    auto to_int = [&](const LocalElem& x) -> mpz_class {
        if (x.exact_zero()) return 0;
        if (x.shift() < 0) throw NonIntegral("Hecke polynomial coefficient not integral");
        return x.digits()[0] * ctx.power(x.shift());
    };
    mpz_class mod = ctx.modulus();
    zp::Poly quad{to_int(c_scaled), -to_int(a_scaled), 1};
    quad = zp::reduce(quad, mod);
    quad.resize(3, 0);
    quad[2] = 1;
    auto roots = local_factors(quad, ctx);
    if (roots.size() == 2) {
        LocalElem r1 = roots[0].root.lift_to(L).times_p_power(s);
        LocalElem r2 = roots[1].root.lift_to(L).times_p_power(s);
        return {L, r1, r2, false};
    }
    FieldRef big = roots[0].field;
    LocalElem alpha = roots[0].root.times_p_power(s);
    LocalElem beta = a_p.lift_to(big) - alpha;
    return {big, alpha, beta, true};
}

}  // namespace imt
