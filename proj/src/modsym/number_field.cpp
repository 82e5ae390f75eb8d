#include "imt/modsym/number_field.hpp"

#include <sstream>
#include <stdexcept>

#include "imt/modsym/linalg.hpp"
#include "imt/modsym/qpoly.hpp"

namespace imt {

NumberField::NumberField(zp::Poly minpoly) : minpoly_(std::move(minpoly)) {
    zp::trim(minpoly_);
    deg_ = zp::degree(minpoly_);
    if (deg_ < 1 || minpoly_.back() != 1) throw std::invalid_argument("NumberField: minpoly must be monic of degree >= 1");
    // Newton identities for the traces of powers of the generator
    power_traces_.assign(deg_, 0);
    power_traces_[0] = deg_;
    for (int j = 1; j < deg_; ++j) {
        mpq_class s = -mpq_class(minpoly_[deg_ - j]) * j;
        for (int i = 1; i < j; ++i) s -= mpq_class(minpoly_[deg_ - i]) * power_traces_[j - i];
        power_traces_[j] = s;
    }
}

KElem NumberField::from_rational(const mpq_class& q) const {
    KElem r(deg_, 0);
    r[0] = q;
    return r;
}

KElem NumberField::gen() const {
    if (deg_ == 1) return from_rational(-mpq_class(minpoly_[0]));
    KElem r(deg_, 0);
    r[1] = 1;
    return r;
}

KElem NumberField::reduce(std::vector<mpq_class> p) const {
    for (int i = static_cast<int>(p.size()) - 1; i >= deg_; --i) {
        if (p[i] == 0) continue;
        mpq_class c = p[i];
        for (int j = 0; j < deg_; ++j) p[i - deg_ + j] -= c * minpoly_[j];
        p[i] = 0;
    }
    p.resize(deg_, 0);
    return p;
}

KElem NumberField::add(const KElem& a, const KElem& b) const {
    KElem r = a;
    for (int i = 0; i < deg_; ++i) r[i] += b[i];
    return r;
}

KElem NumberField::sub(const KElem& a, const KElem& b) const {
    KElem r = a;
    for (int i = 0; i < deg_; ++i) r[i] -= b[i];
    return r;
}

KElem NumberField::neg(const KElem& a) const {
    KElem r = a;
    for (auto& c : r) c = -c;
    return r;
}

KElem NumberField::mul(const KElem& a, const KElem& b) const {
    std::vector<mpq_class> p(2 * deg_ - 1, 0);
    for (int i = 0; i < deg_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < deg_; ++j)
            if (b[j] != 0) p[i + j] += a[i] * b[j];
    }
    return reduce(std::move(p));
}

KElem NumberField::scale(const KElem& a, const mpq_class& q) const {
    KElem r = a;
    for (auto& c : r) c *= q;
    return r;
}

KElem NumberField::inv(const KElem& a) const {
    if (is_zero(a)) throw std::domain_error("NumberField::inv: zero");
    // solve a * x = 1 through the multiplication matrix
    la::Mat M(deg_, deg_ + 1);
    KElem basis(deg_, 0);
    for (int j = 0; j < deg_; ++j) {
        basis.assign(deg_, 0);
        basis[j] = 1;
        KElem col = mul(a, basis);
        for (int i = 0; i < deg_; ++i) M(i, j) = col[i];
    }
    M(0, deg_) = 1;
    auto [R, piv] = la::rref(M);
    KElem x(deg_, 0);
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = R(static_cast<int>(i), deg_);
    return x;
}

KElem NumberField::pow(const KElem& a, long e) const {
    if (e < 0) return pow(inv(a), -e);
    KElem r = one(), b = a;
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

bool NumberField::is_zero(const KElem& a) {
    for (auto& c : a)
        if (c != 0) return false;
    return true;
}

bool NumberField::is_rational(const KElem& a) const {
    for (int i = 1; i < deg_; ++i)
        if (a[i] != 0) return false;
    return true;
}

mpq_class NumberField::trace(const KElem& a) const {
    mpq_class t = 0;
    for (int i = 0; i < deg_; ++i) t += a[i] * power_traces_[i];
    return t;
}

std::string NumberField::str(const KElem& a) const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < deg_; ++i) {
        if (a[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << a[i].get_str();
        if (i == 1) os << "*a";
        if (i > 1) os << "*a^" << i;
    }
    if (first) os << "0";
    return os.str();
}

zp::Poly cyclotomic(long m) {
    if (m < 1) throw std::invalid_argument("cyclotomic: order must be positive");
    qp::Poly f(m + 1, 0);
    f[0] = -1;
    f[m] = 1;
    for (long d = 1; d < m; ++d) {
        if (m % d) continue;
        f = qp::divmod(f, qp::from_z(cyclotomic(d))).first;
    }
    return qp::to_z(f);
}

}  // namespace imt
