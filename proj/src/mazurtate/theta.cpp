#include "imt/mazurtate/theta.hpp"

#include <numeric>
#include <unordered_map>

#include "imt/error.hpp"

namespace imt {

namespace {

long ipow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

mpz_class binom(long n, long r) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, r);
    return b;
}

}  // namespace

ThetaRaw theta_raw(const EigenSymbol& phi, long p, int n, std::vector<int> js) {
    if (n < 1) throw OutOfRange("theta_raw needs n >= 1");
    const int w = phi.weight() - 2;
    if (js.empty())
        for (int j = 0; j <= w; ++j) js.push_back(j);
    const long pn = ipow(p, n);
    const NumberField& K = phi.field();
    ThetaRaw raw{p, n, {}, {}, js};
    for (long a = 1; a < pn; ++a) {
        if (a % p == 0) continue;
        raw.residues.push_back(a);
        std::vector<KElem> row;
        const QCusp from = QCusp::rational(-a, pn), to = QCusp::infinity();
        for (int j : js) {
            // (p^n x + a y)^j y^(w-j)
            std::vector<mpq_class> Q(w + 1, 0);
            mpz_class pn_pow = 1;
            for (int s = 0; s <= j; ++s) {
                mpz_class a_pow;
                mpz_ui_pow_ui(a_pow.get_mpz_t(), a, j - s);
                Q[s] = binom(j, s) * pn_pow * a_pow;
                pn_pow *= pn;
            }
            row.push_back(phi.path_value(Q, from, to));
        }
        raw.values.push_back(std::move(row));
    }
    (void)K;
    return raw;
}

std::vector<long> gamma_logs(long p, int n, const std::vector<long>& residues) {
    const long pn = ipow(p, n);
    const long pn1 = pn * p;
    PrimeContext ctx(p, n + 2);
    std::unordered_map<long, long> table;
    long x = 1;
    for (long m = 0; m < pn; ++m) {
        table[x] = m;
        x = x * (1 + p) % pn1;
    }
    std::vector<long> out;
    for (long a : residues) {
        mpz_class w = teichmuller_int(a, ctx) % pn1;
        mpz_class winv;
        mpz_class mod = pn1;
        mpz_invert(winv.get_mpz_t(), w.get_mpz_t(), mod.get_mpz_t());
        long u = mpz_class((a % pn1) * winv % mod).get_si();
        auto it = table.find(u);
        if (it == table.end()) throw HypothesisViolated("principal unit outside the cyclic group generated by 1+p");
        out.push_back(it->second);
    }
    return out;
}

ThetaElement project_theta(const ThetaRaw& raw, int j, int i, const NormalizedSymbol& phi, bool check_sign) {
    const long p = raw.p;
    const int n = raw.n - 1;
    if (n < 0) throw OutOfRange("project_theta needs raw values at level n + 1 >= 1");
    if (i < 0 || i > p - 2) throw OutOfRange("character index outside [0, p-2]");
    const int sign = (i % 2 == 0) ? 1 : -1;
    if (check_sign && phi.symbol().sign() != sign)
        throw HypothesisViolated("symbol sign does not match the parity of the character index");
    auto slot = std::find(raw.js.begin(), raw.js.end(), j);
    if (slot == raw.js.end()) throw OutOfRange("requested component was not computed");
    const size_t s = static_cast<size_t>(slot - raw.js.begin());
    FieldRef L = phi.local();
    const PrimeContext& ctx = L->ctx();
    const long twist = ((i - j) % (p - 1) + (p - 1)) % (p - 1);
    const auto logs = gamma_logs(p, n, raw.residues);
    std::vector<LocalElem> a(ipow(p, n), LocalElem::zero(L));
    for (size_t idx = 0; idx < raw.residues.size(); ++idx) {
        LocalElem v = phi.embed(raw.values[idx][s]);
        if (v.exact_zero()) continue;
        LocalElem w = LocalElem::from_int(L, teichmuller_int(raw.residues[idx], ctx));
        a[logs[idx]] += v * w.pow(twist);
    }
    GroupRingPoly body = GroupRingPoly::from_group_basis(L, n, a);
    bool integral = true;
    for (auto& c : body.coeffs())
        if (!c.exact_zero() && c.valuation_lower_bound() < 0) integral = false;
    return {"", p, n, j, i, sign, std::move(body), integral};
}

ThetaElement theta_element(const NormalizedSymbol& phi, int n, int j, int i, bool check_sign) {
    const long p = phi.local()->ctx().p;
    ThetaRaw raw = theta_raw(phi.symbol(), p, n + 1, {j});
    return project_theta(raw, j, i, phi, check_sign);
}

StabilizedTheta stabilize(const ThetaElement& theta_n, const ThetaElement& theta_prev, const LocalElem& upsilon,
                          const LocalElem& eps_p, int k) {
    if (theta_n.n < 1 || theta_prev.n != theta_n.n - 1) throw OutOfRange("stabilize needs consecutive levels n >= 1");
    FieldRef F = upsilon.field();
    auto into = [&](const GroupRingPoly& G) {
        if (G.field()->same(*F)) return G;
        std::vector<LocalElem> c;
        for (auto& x : G.coeffs()) c.push_back(x.lift_to(F));
        GroupRingPoly out = GroupRingPoly::from_poly(F, G.level(), c);
        out.set_denom_exp(G.denom_exp());
        return out;
    };
    GroupRingPoly cur = into(theta_n.body);
    GroupRingPoly prev = into(theta_prev.body).norm_to(theta_n.n);
    const int n = theta_n.n;
    LocalElem e = eps_p.field()->same(*F) ? eps_p : eps_p.lift_to(F);
    LocalElem c1 = upsilon.pow(-(n + 1));
    LocalElem c2 = e.times_p_power(k - 2) * upsilon.pow(-(n + 2));
    GroupRingPoly body = cur.scaled(c1) - prev.scaled(c2);
    return {theta_n, upsilon, std::move(body)};
}

}  // namespace imt
