#include "imt/logmatrix/pi_series.hpp"

#include <algorithm>

#include "imt/error.hpp"

namespace imt {

ModArith::ModArith(const PrimeContext& ctx) : p_(ctx.p), M_(ctx.M) {
    mpz_class m = ctx.modulus();
    if (mpz_sizeinbase(m.get_mpz_t(), 2) > 62) throw OutOfRange("p^M must stay below 2^62 for series arithmetic");
    m_ = m.get_ui();
}

std::uint64_t ModArith::from(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), m_);
    return r.get_ui();
}

std::uint64_t ModArith::from(long x) const {
    long r = x % static_cast<long>(m_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<long>(m_) : r);
}

int ModArith::ord(std::uint64_t a) const {
    if (a == 0) return M_;
    int v = 0;
    while (a % p_ == 0) {
        a /= p_;
        ++v;
    }
    return v;
}

PiSeries::PiSeries(const ModArith& R, int trunc) : R_(R), c_(static_cast<size_t>(trunc), 0) {}

PiSeries PiSeries::constant(const ModArith& R, int trunc, std::uint64_t c) {
    PiSeries s(R, trunc);
    if (trunc > 0) s.c_[0] = c % R.modulus();
    return s;
}

PiSeries PiSeries::pi(const ModArith& R, int trunc) {
    PiSeries s(R, trunc);
    if (trunc > 1) s.c_[1] = 1 % R.modulus();
    return s;
}

PiSeries PiSeries::one_plus_pi_power(const ModArith& R, int trunc, long a) {
    // binomial coefficients C(a, i) mod p^M
    PiSeries s(R, trunc);
    mpz_class b = 1;
    for (long i = 0; i < trunc && i <= a; ++i) {
        s.c_[i] = R.from(b);
        b = b * (a - i) / (i + 1);
    }
    return s;
}

bool PiSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::uint64_t x) { return x == 0; });
}

int PiSeries::min_ord(int bound) const {
    int v = R_.precision();
    for (int i = 0; i < std::min(bound, trunc()); ++i) v = std::min(v, R_.ord(c_[i]));
    return v;
}

PiSeries& PiSeries::operator+=(const PiSeries& o) {
    for (int i = 0; i < std::min(trunc(), o.trunc()); ++i) c_[i] = R_.add(c_[i], o.c_[i]);
    if (o.trunc() < trunc()) c_.resize(o.c_.size());
    return *this;
}

PiSeries& PiSeries::operator-=(const PiSeries& o) {
    for (int i = 0; i < std::min(trunc(), o.trunc()); ++i) c_[i] = R_.sub(c_[i], o.c_[i]);
    if (o.trunc() < trunc()) c_.resize(o.c_.size());
    return *this;
}

PiSeries operator*(const PiSeries& a, const PiSeries& b) {
    const int D = std::min(a.trunc(), b.trunc());
    const ModArith& R = a.R_;
    std::vector<unsigned __int128> acc(static_cast<size_t>(D), 0);
    const unsigned __int128 m = R.modulus();
    const unsigned __int128 cap = m * m * 8;
    for (int i = 0; i < D; ++i) {
        if (a.c_[i] == 0) continue;
        for (int j = 0; i + j < D; ++j) {
            acc[i + j] += static_cast<unsigned __int128>(a.c_[i]) * b.c_[j];
            if (acc[i + j] >= cap) acc[i + j] %= m;
        }
    }
    PiSeries out(R, D);
    for (int i = 0; i < D; ++i) out.c_[i] = static_cast<std::uint64_t>(acc[i] % m);
    return out;
}

PiSeries PiSeries::scaled(std::uint64_t s) const {
    PiSeries out = *this;
    for (auto& x : out.c_) x = R_.mul(x, s % R_.modulus());
    return out;
}

PiSeries PiSeries::negated() const {
    PiSeries out = *this;
    for (auto& x : out.c_) x = R_.neg(x);
    return out;
}

PiSeries PiSeries::pow(long e) const {
    PiSeries result = constant(R_, trunc(), 1);
    PiSeries base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

PiSeries PiSeries::inverse() const {
    if (trunc() == 0) return *this;
    mpz_class c0 = c_[0], m = R_.modulus(), inv;
    if (!mpz_invert(inv.get_mpz_t(), c0.get_mpz_t(), m.get_mpz_t()))
        throw HypothesisViolated("series with a non-unit constant term is not invertible");
    const std::uint64_t i0 = inv.get_ui();
    PiSeries out(R_, trunc());
    out.c_[0] = i0;
    for (int i = 1; i < trunc(); ++i) {
        std::uint64_t s = 0;
        for (int j = 1; j <= i; ++j) s = R_.add(s, R_.mul(c_[j], out.c_[i - j]));
        out.c_[i] = R_.neg(R_.mul(i0, s));
    }
    return out;
}

std::vector<std::uint64_t> PiSeries::in_t_basis() const {
    // Horner in π = T - 1
    std::vector<std::uint64_t> r;
    for (int i = trunc() - 1; i >= 0; --i) {
        std::vector<std::uint64_t> next(r.size() + 1, 0);
        for (size_t e = 0; e < r.size(); ++e) {
            next[e + 1] = R_.add(next[e + 1], r[e]);
            next[e] = R_.sub(next[e], r[e]);
        }
        next[0] = R_.add(next[0], c_[i]);
        r = std::move(next);
    }
    r.resize(c_.size(), 0);
    return r;
}

PiSeries PiSeries::from_t_basis(const ModArith& R, int trunc, const std::vector<std::uint64_t>& t) {
    // Horner in T = 1 + π, truncated
    PiSeries r(R, trunc);
    for (size_t idx = t.size(); idx-- > 0;) {
        for (int e = trunc - 1; e >= 1; --e) r.c_[e] = R.add(r.c_[e], r.c_[e - 1]);
        if (trunc > 0) r.c_[0] = R.add(r.c_[0], t[idx]);
    }
    return r;
}

PiSeries phi_op(const PiSeries& F) {
    const ModArith& R = F.ring();
    const long p = R.p();
    const int D = F.trunc();
    std::vector<std::uint64_t> phi_pi(static_cast<size_t>(p + 1), 0);
    mpz_class b = 1;
    for (long i = 0; i <= p; ++i) {
        if (i > 0) phi_pi[i] = R.from(b);
        b = b * (p - i) / (i + 1);
    }
    PiSeries r(R, D);
    for (int i = D - 1; i >= 0; --i) {
        PiSeries next(R, D);
        for (int e = 0; e < D; ++e) {
            if (r[e] == 0) continue;
            for (long s = 1; s <= p && e + s < D; ++s) next[e + s] = R.add(next[e + s], R.mul(r[e], phi_pi[s]));
        }
        next[0] = R.add(next[0], F[i]);
        r = std::move(next);
    }
    return r;
}

PiSeries psi_op(const PiSeries& F) {
    const ModArith& R = F.ring();
    const long p = R.p();
    if (F.trunc() < p) throw TruncationTooSmall("psi needs at least p coefficients");
    auto t = F.in_t_basis();
    std::vector<std::uint64_t> g((t.size() + p - 1) / p, 0);
    for (size_t c = 0; c < t.size(); c += p) g[c / p] = t[c];
    return PiSeries::from_t_basis(R, F.trunc(), g);
}

QDelta q_delta(const ModArith& R, int trunc) {
    const long p = R.p();
    if (trunc < p) throw TruncationTooSmall("q and delta need truncation at least p");
    PiSeries q(R, trunc), dinv(R, trunc);
    mpz_class b = p;  // C(p, i + 1)
    for (long i = 0; i < p; ++i) {
        q[i] = R.from(b);
        if (i < p - 1) dinv[i] = R.from(mpz_class(b / p));
        b = b * (p - i - 1) / (i + 2);
    }
    return {q, dinv.inverse(), dinv};
}

TwoByTwo<PiSeries> pf_inverse(std::uint64_t a_p, std::uint64_t eps_p, int k, const ModArith& R, int trunc) {
    QDelta qd = q_delta(R, trunc);
    PiSeries dk = qd.delta_inv.pow(k - 1);
    return {dk.scaled(a_p), dk, qd.q.pow(k - 1).scaled(R.neg(eps_p % R.modulus())), PiSeries(R, trunc)};
}

std::pair<TwoByTwo<PiSeries>, PiSeries> pf_scaled(std::uint64_t a_p, std::uint64_t eps_p, int k, const ModArith& R,
                                                  int trunc) {
    QDelta qd = q_delta(R, trunc);
    PiSeries eq = qd.q.pow(k - 1).scaled(eps_p);
    TwoByTwo<PiSeries> S{PiSeries(R, trunc), PiSeries::constant(R, trunc, R.neg(1)), qd.delta.pow(k - 1) * eq,
                         PiSeries::constant(R, trunc, a_p)};
    return {S, eq};
}

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

PiSeries mellin(const LevelMeasure& A, const ModArith& R, int trunc) {
    const long pm = ipow(A.p, A.level);
    if (trunc < pm) throw TruncationTooSmall("Mellin transform needs truncation at least p^level");
    std::vector<std::uint64_t> t(static_cast<size_t>(pm) + 1, 0);
    // the class of 0 is represented by p^level
    for (long c = 0; c < pm && c < static_cast<long>(A.mass.size()); ++c) t[c == 0 ? pm : c] = A.mass[c];
    return PiSeries::from_t_basis(R, trunc, t);
}

LevelMeasure mellin_inverse(const PiSeries& F, int level, int guard) {
    const ModArith& R = F.ring();
    const long p = R.p();
    const long pm = ipow(p, level);
    if (level < 1) throw OutOfRange("Mellin inverse needs level at least 1");
    if (F.trunc() < pm) throw TruncationTooSmall("Mellin inverse needs truncation at least p^level");
    auto t = F.in_t_basis();
    LevelMeasure out{p, level, std::vector<std::uint64_t>(static_cast<size_t>(pm), 0)};
    for (size_t c = 0; c < t.size(); ++c) out.mass[c % pm] = R.add(out.mass[c % pm], t[c]);
    const int tol = R.precision() - guard;
    for (long c = 0; c < pm; c += p)
        if (R.ord(out.mass[c]) < tol)
            throw NotInPsiZero("class " + std::to_string(c) + " mod p^" + std::to_string(level) + " carries mass");
    for (long c = 0; c < pm; c += p) out.mass[c] = 0;
    return out;
}

}  // namespace imt
