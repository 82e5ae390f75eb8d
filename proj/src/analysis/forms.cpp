#include "imt/analysis/forms.hpp"

#include <future>
#include <mutex>

#include "imt/error.hpp"

namespace imt {

namespace {

long integer_trace(const EigenSymbol& s, long ell) {
    mpq_class t = s.field().trace(s.hecke_eigenvalue(ell));
    if (t.get_den() != 1) throw NonIntegral("trace of a_" + std::to_string(ell));
    return t.get_num().get_si();
}

struct SpaceCache {
    std::shared_ptr<const ModSymSpace> space;
    std::vector<EigenSymbol> systems;
};

// shared across threads: each space is decomposed once, later callers wait for it
const SpaceCache& decomposed(long level, int weight, const std::string& character, int sign) {
    static std::mutex guard;
    static std::map<std::string, std::shared_future<std::shared_ptr<const SpaceCache>>> cache;
    const std::string key =
        std::to_string(level) + "/" + std::to_string(weight) + "/" + character + "/" + std::to_string(sign);
    std::promise<std::shared_ptr<const SpaceCache>> promise;
    std::shared_future<std::shared_ptr<const SpaceCache>> pending;
    {
        std::lock_guard lock(guard);
        auto it = cache.find(key);
        if (it != cache.end()) {
            pending = it->second;
        } else {
            cache.emplace(key, promise.get_future().share());
        }
    }
    if (pending.valid()) return *pending.get();
    try {
        auto c = std::make_shared<SpaceCache>();
        c->space = std::make_shared<const ModSymSpace>(level, weight, DirichletCharacter::parse(level, character));
        c->systems = eigen_decompose(c->space, sign);
        promise.set_value(c);
        return *c;
    } catch (...) {
        {
            std::lock_guard lock(guard);
            cache.erase(key);
        }
        promise.set_exception(std::current_exception());
        throw;
    }
}

}  // namespace

ResolvedForm ResolvedForm::resolve(const FormSpec& spec, int sign) {
    const auto& c = decomposed(spec.level, spec.weight, spec.character, sign);
    std::vector<const EigenSymbol*> hits;
    for (const auto& s : c.systems) {
        if (s.field().degree() != spec.degree) continue;
        bool ok = true;
        for (auto [ell, tr] : spec.traces) ok = ok && integer_trace(s, ell) == tr;
        if (ok) hits.push_back(&s);
    }
    if (hits.empty()) throw NotFound("no eigen-system matches " + spec.label);
    if (hits.size() > 1) throw SchemaMismatch(spec.label + " matches " + std::to_string(hits.size()) + " systems");
    ResolvedForm out;
    out.spec_ = spec;
    out.space_ = c.space;
    out.symbol_ = std::make_shared<const EigenSymbol>(*hits.front());
    return out;
}

std::vector<FormCandidate> ResolvedForm::candidates(long level, int weight, const std::string& character,
                                                    std::vector<long> ells, int sign) {
    std::vector<FormCandidate> out;
    for (const auto& s : decomposed(level, weight, character, sign).systems) {
        FormCandidate fc;
        fc.degree = s.field().degree();
        for (long ell : ells)
            if (level % ell != 0) fc.traces[ell] = integer_trace(s, ell);
        out.push_back(std::move(fc));
    }
    return out;
}

FormAtPrime::FormAtPrime(const ResolvedForm& form, long p, int prime_index, int precision)
    : label_(form.spec().label),
      p_(p),
      prime_index_(prime_index),
      symbol_(std::make_shared<const EigenSymbol>(adapt_to_prime(form.symbol(), PrimeContext(p, precision)))),
      phi_(*symbol_, EmbeddedNumberField::make(symbol_->field().minpoly(), prime_index, PrimeContext(p, precision))),
      a_p_(phi_.embed_unscaled(symbol_->hecke_eigenvalue(p))),
      eps_p_(phi_.embed_unscaled(symbol_->character_value(p))) {}

std::optional<mpq_class> FormAtPrime::slope() const {
    if (a_p_.is_zero()) return std::nullopt;
    return a_p_.ord_p();
}

ThetaElement FormAtPrime::theta(int n, int i, int j) const {
    auto th = theta_element(phi_, n, j, i);
    th.label = label_;
    return th;
}

std::vector<InvariantPoint> FormAtPrime::invariants(int n_max, int i, int j) const {
    std::vector<InvariantPoint> out;
    for (int n = 0; n <= n_max; ++n) {
        auto inv = mu_lambda(theta(n, i, j).body);
        out.push_back({n, inv.mu, inv.lambda});
    }
    return out;
}

std::vector<std::optional<mpq_class>> prime_slopes(const ResolvedForm& form, long p, int precision) {
    const PrimeContext ctx(p, precision);
    const EigenSymbol adapted = adapt_to_prime(form.symbol(), ctx);
    const auto factors = local_factors(adapted.field().minpoly(), ctx);
    std::vector<std::optional<mpq_class>> out;
    for (int idx = 1; idx <= static_cast<int>(factors.size()); ++idx) {
        auto emb = EmbeddedNumberField::make(adapted.field().minpoly(), idx, ctx);
        auto ap = emb.embed(adapted.hecke_eigenvalue(p));
        out.push_back(ap.is_zero() ? std::nullopt : std::optional<mpq_class>(ap.ord_p()));
    }
    return out;
}

int prime_index_for_slope(const ResolvedForm& form, long p, const std::optional<mpq_class>& slope, int precision) {
    const auto slopes = prime_slopes(form, p, precision);
    int found = 0;
    for (int idx = 1; idx <= static_cast<int>(slopes.size()); ++idx) {
        if (slopes[idx - 1] != slope) continue;
        if (found) throw SchemaMismatch("several primes of slope " + slope_string(slope));
        found = idx;
    }
    if (!found) throw NotFound("no prime of slope " + slope_string(slope) + " for " + form.spec().label);
    return found;
}

std::optional<mpq_class> parse_slope(const std::string& text) {
    if (text == "inf") return std::nullopt;
    mpq_class q(text);
    q.canonicalize();
    return q;
}

std::string slope_string(const std::optional<mpq_class>& slope) {
    return slope ? slope->get_str() : "inf";
}

}  // namespace imt
