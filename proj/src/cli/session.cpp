#include "imt/cli/session.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <mutex>
#include <sstream>

#include "imt/analysis/serre.hpp"
#include "imt/cli/lmfdb.hpp"
#include "imt/error.hpp"
#include "imt/logmatrix/log_matrix.hpp"

namespace imt::cli {

using nlohmann::json;

namespace {

// desk-scale guards on a job
void check_job(long p, long level, int weight, int nmax) {
    if (p != 3 && p != 5 && p != 7 && p != 11) throw OutOfRange("p must be one of 3, 5, 7, 11");
    if (nmax < 0 || nmax > 4) throw OutOfRange("nmax must lie in [0, 4]");
    if (level > 64) throw OutOfRange("level above 64");
    if (weight > 52) throw OutOfRange("weight above 52");
}

std::string strip_kind(const Error& e) {
    std::string what = e.what();
    const std::string prefix = std::string(to_string(e.kind())) + ": ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

// runs one pipeline stage, naming it in any library error
template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        const std::string detail = strip_kind(e);
        if (detail.rfind("[stage ", 0) == 0) throw;
        throw Error(e.kind(), std::string("[stage ") + name + "] " + detail);
    }
}

json point_json(const InvariantPoint& pt) {
    return json{{"n", pt.n}, {"mu", pt.mu ? json(*pt.mu) : json(nullptr)},
                {"lambda", pt.lambda ? json(*pt.lambda) : json(nullptr)}};
}

InvariantPoint point_from(const json& j) {
    InvariantPoint pt;
    pt.n = j.at("n").get<int>();
    if (!j.at("mu").is_null()) pt.mu = j.at("mu").get<long>();
    if (!j.at("lambda").is_null()) pt.lambda = j.at("lambda").get<long>();
    return pt;
}

json opt_json(const std::optional<long>& v) { return v ? json(*v) : json(nullptr); }

std::string rational(const mpq_class& q) { return q.get_str(); }

json report_json(const SignedReport& r) {
    json pts = json::array();
    for (const auto& pt : r.points) pts.push_back(point_json(pt));
    return json{{"label", r.label},
                {"p", r.p},
                {"prime_index", r.prime_index},
                {"i", r.i},
                {"j", r.j},
                {"k", r.k},
                {"points", pts},
                {"mu", opt_json(r.mu)},
                {"lambda_sharp", opt_json(r.lambda_sharp)},
                {"lambda_flat", opt_json(r.lambda_flat)},
                {"n0", r.n0},
                {"n_max", r.n_max},
                {"pattern", to_string(r.pattern)},
                {"mu_hypothesis", r.mu_hypothesis},
                {"note", r.note}};
}

std::string poly_string(const fp::Poly& f) {
    if (fp::is_zero(f)) return "0";
    std::string out;
    for (int e = fp::degree(f); e >= 0; --e) {
        if (f[e] == 0) continue;
        if (!out.empty()) out += " + ";
        if (e == 0 || f[e] != 1) out += std::to_string(f[e]);
        if (e > 0) out += e == 1 ? "X" : "X^" + std::to_string(e);
    }
    return out;
}

std::optional<std::string> env_value(const EnvLookup& env, const std::string& name) {
    return env ? env(name) : std::nullopt;
}

// signed invariants the series does not determine print as "-", unlike λ = ∞
json undetermined(const json& r, const char* key) {
    return r.contains(key) && !r[key].is_null() ? r[key] : json("-");
}

// too few levels for the signed invariants still leaves the λ series to compare
SignedReport report_or_points(const std::vector<InvariantPoint>& pts, int k, long p,
                              std::span<const InvariantPoint> companion) {
    try {
        return extract_signed(pts, k, p, companion);
    } catch (const InsufficientData& e) {
        SignedReport r;
        r.p = p;
        r.k = k;
        r.points = pts;
        r.note = e.what();
        return r;
    }
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

}  // namespace

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        const char* v = std::getenv(name.c_str());
        return v ? std::optional<std::string>(v) : std::nullopt;
    };
}

Config resolve_config(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                      const std::optional<std::filesystem::path>& file) {
    std::map<std::string, std::string> merged;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw NotFound("cannot read config " + file->string());
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw SchemaMismatch(file->string() + ": expected a JSON object");
        for (auto& [key, v] : j.items()) merged[key] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    for (const char* key : {"precision", "fixtures", "cache-dir", "lmfdb-url", "no-net", "format", "workers"}) {
        std::string name = std::string("IMT_") + key;
        std::transform(name.begin(), name.end(), name.begin(), [](char c) { return c == '-' ? '_' : std::toupper(c); });
        if (auto v = env_value(env, name)) merged[key] = *v;
    }
    for (const auto& [key, v] : flags) merged[key] = v;

    Config cfg;
    try {
        if (auto it = merged.find("precision"); it != merged.end()) cfg.precision = std::stoi(it->second);
        if (auto it = merged.find("workers"); it != merged.end()) cfg.workers = std::max(1, std::stoi(it->second));
    } catch (const std::exception&) {
        throw SchemaMismatch("precision and workers must be integers");
    }
    if (auto it = merged.find("fixtures"); it != merged.end()) cfg.fixtures = it->second;
    if (auto it = merged.find("cache-dir"); it != merged.end()) cfg.cache_dir = it->second;
    if (auto it = merged.find("lmfdb-url"); it != merged.end()) cfg.lmfdb_url = it->second;
    if (auto it = merged.find("no-net"); it != merged.end()) cfg.no_net = truthy(it->second);
    if (auto it = merged.find("format"); it != merged.end()) cfg.format = it->second;
    if (cfg.precision < 5) throw OutOfRange("precision below 5");
    return cfg;
}

std::filesystem::path ResultCache::path_for(const json& key) const {
    return dir_ / ("result-" + content_hash(key.dump()) + ".json");
}

std::optional<json> ResultCache::get(const json& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    // a half-written file cannot be seen (writes rename into place); a corrupt one is a miss
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("key") || j["key"] != key) return std::nullopt;
    return j["value"];
}

void ResultCache::put(const json& key, const json& value) const {
    if (!enabled()) return;
    write_atomic(path_for(key), json{{"key", key}, {"value", value}}.dump() + "\n");
}

std::vector<RowRequest> read_form_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot read form list " + path.string());
    std::vector<RowRequest> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = line.substr(0, line.find('#'));
        std::istringstream words(line);
        std::string word;
        if (!(words >> word)) continue;
        RowRequest r;
        if (auto at = word.find('@'); at != std::string::npos) {
            r.label = word.substr(0, at);
            r.table_index = std::stoi(word.substr(at + 1));
        } else {
            r.label = word;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

Session::Session(Config cfg) : cfg_(std::move(cfg)), cache_(cfg_.cache_dir) {
    if (std::filesystem::exists(cfg_.fixtures)) pack_ = load_fixtures(cfg_.fixtures);
}

FormDescriptor Session::descriptor(const std::string& label) {
    try {
        return pack_.find(label);
    } catch (const NotFound&) {
        if (cfg_.no_net) throw NotFound(label + " is not in the fixtures and the network is disabled");
    }
    const auto dir = cache_.enabled() ? cfg_.cache_dir / "lmfdb" : std::filesystem::path();
    LmfdbClient client(cfg_.lmfdb_url, dir);
    return stage("fetch", [&] { return client.fetch_form(label).descriptor; });
}

const ResolvedForm& Session::resolved(const FormDescriptor& d) {
    static std::mutex guard;
    {
        std::lock_guard lock(guard);
        if (auto it = resolved_.find(d.label); it != resolved_.end()) return it->second;
    }
    auto form = stage("eigen_decompose", [&] { return ResolvedForm::resolve(d.spec()); });
    std::lock_guard lock(guard);
    return resolved_.emplace(d.label, std::move(form)).first->second;
}

FormAtPrime Session::at_prime(const FormDescriptor& d, long p, int table_index) {
    const auto& form = resolved(d);
    const int index = stage("normalize", [&] { return resolve_prime(d, form, p, table_index, cfg_.precision); });
    return stage("normalize", [&] { return FormAtPrime(form, p, index, cfg_.precision); });
}

json Session::space(long level, int weight, const std::string& character) {
    check_job(5, level, weight, 0);
    return stage("build_space", [&] {
        ModSymSpace s(level, weight, DirichletCharacter::parse(level, character));
        json systems = json::array();
        for (const auto& c : ResolvedForm::candidates(level, weight, character, {2, 3, 5, 7, 11, 13})) {
            json tr = json::object();
            for (auto [ell, t] : c.traces) tr[std::to_string(ell)] = t;
            systems.push_back(json{{"degree", c.degree}, {"traces", tr}});
        }
        return json{{"command", "space"},
                    {"level", level},
                    {"weight", weight},
                    {"character", character},
                    {"dimension", s.dimension()},
                    {"cuspidal_dimension", s.cuspidal_dimension()},
                    {"plus_dimension", s.cuspidal_sign_basis(1).size()},
                    {"systems", systems}};
    });
}

json Session::eigen(const std::string& label, long p) {
    const auto d = descriptor(label);
    check_job(p, d.level, d.weight, 0);
    const auto& form = resolved(d);
    const auto& sym = form.symbol();
    json traces = json::object();
    for (long ell : {2L, 3L, 5L, 7L, 11L, 13L})
        if (d.level % ell != 0) traces[std::to_string(ell)] = sym.field().str(sym.hecke_eigenvalue(ell));
    json primes = json::array();
    const auto slopes = stage("normalize", [&] { return prime_slopes(form, p, cfg_.precision); });
    for (size_t idx = 0; idx < slopes.size(); ++idx)
        primes.push_back(json{{"index", idx + 1}, {"slope", slope_string(slopes[idx])}});
    return json{{"command", "eigen"}, {"label", d.label}, {"level", d.level}, {"weight", d.weight},
                {"degree", sym.field().degree()}, {"eigenvalues", traces}, {"p", p}, {"primes", primes}};
}

json Session::theta(const std::string& label, long p, int table_index, int n, int i, int j) {
    const auto d = descriptor(label);
    check_job(p, d.level, d.weight, n);
    auto at = at_prime(d, p, table_index);
    auto th = stage("theta", [&] { return at.theta(n, i, j); });
    const auto inv = stage("invariants", [&] { return mu_lambda(th.body); });
    json coeffs = json::array();
    for (const auto& c : th.body.group_basis()) coeffs.push_back(c.str());
    return json{{"command", "theta"}, {"label", d.label}, {"p", p}, {"prime_index", at.prime_index()},
                {"n", n}, {"i", i}, {"j", j}, {"mu", opt_json(inv.mu)}, {"lambda", opt_json(inv.lambda)},
                {"group_basis", coeffs}};
}

json Session::invariants(const std::string& label, long p, int table_index, int nmax, int i, int j) {
    const auto d = descriptor(label);
    check_job(p, d.level, d.weight, nmax);
    const json key{{"command", "invariants"}, {"form", d}, {"p", p}, {"table_index", table_index},
                   {"nmax", nmax}, {"i", i}, {"j", j}, {"precision", cfg_.precision}, {"version", kCodeVersion}};
    if (auto hit = cache_.get(key)) return *hit;
    auto at = at_prime(d, p, table_index);
    const auto pts = stage("invariants", [&] { return at.invariants(nmax, i, j); });
    json points = json::array();
    for (const auto& pt : pts) points.push_back(point_json(pt));
    json out{{"command", "invariants"}, {"label", d.label}, {"p", p}, {"prime_index", at.prime_index()},
             {"table_index", table_index}, {"slope", slope_string(at.slope())}, {"k", d.weight},
             {"level", d.level}, {"degree", d.degree}, {"i", i}, {"j", j}, {"points", points}};
    cache_.put(key, out);
    return out;
}

json Session::signed_report(const std::string& label, long p, int table_index, int nmax, int i, int j,
                            const std::optional<std::string>& companion) {
    const auto inv = invariants(label, p, table_index, nmax, i, j);
    std::vector<InvariantPoint> pts, comp;
    for (const auto& pt : inv["points"]) pts.push_back(point_from(pt));
    if (companion) {
        const auto c = invariants(*companion, p, 1, nmax, i, j);
        for (const auto& pt : c["points"]) comp.push_back(point_from(pt));
    }
    auto r = stage("signed", [&] { return extract_signed(pts, inv["k"].get<int>(), p, comp); });
    r.label = inv["label"];
    r.prime_index = inv["prime_index"];
    r.i = i;
    r.j = j;
    json out = report_json(r);
    out["command"] = "signed";
    out["slope"] = inv["slope"];
    auto bound = check_lower_bound(r, r.k);
    out["lower_bound"] = json{{"ok", bound.ok}, {"tight", bound.tight}};
    return out;
}

json Session::cmatrix(const std::string& label, long p, int n, int mellin_level) {
    const auto d = descriptor(label);
    check_job(p, d.level, d.weight, n);
    // the logarithmic matrix works with residues mod p^M in 64 bits
    int precision = 1;
    for (mpz_class pm = p; pm * p < mpz_class(1) << 57 && precision < cfg_.precision; pm *= p) ++precision;
    const auto& form = resolved(d);
    FormAtPrime at(form, p, resolve_prime(d, form, p, 1, precision), precision);
    const auto& ctx = at.phi().local()->ctx();
    auto C = stage("c_matrix", [&] { return c_matrix(at.a_p(), at.eps_p(), at.weight(), n, ctx, mellin_level); });
    auto verdict = stage("c_matrix", [&] { return check_cnf_structure(C); });
    json out{{"command", "cmatrix"}, {"label", d.label}, {"p", p}, {"n", n}, {"k", C.k},
             {"level", C.level}, {"precision", precision}, {"reliable_prec", C.reliable_prec}, {"support_ok", C.support_ok},
             {"cnf_ok", verdict.ok}, {"failure", verdict.failure},
             {"minus_cofactor", poly_string(verdict.minus_cofactor)},
             {"plus_cofactor", poly_string(verdict.plus_cofactor)}};
    if (n >= 1) {
        auto th_n = stage("theta", [&] { return at.theta(n); });
        auto th_prev = stage("theta", [&] { return at.theta(n - 1); });
        auto s = stage("solve_signed", [&] { return solve_signed(th_n.body, th_prev.body, C); });
        out["signed"] = json{{"kind", to_string(s.kind)}, {"consistent", s.consistent},
                             {"divisible", s.divisible}, {"lambda", opt_json(s.lambda)},
                             {"mu_shift", s.mu_shift}, {"precision", s.precision}};
    }
    return out;
}

json Session::serre(long p, long k) {
    const auto s = stage("serre", [&] { return serre_combinatorics(p, k); });
    return json{{"command", "serre"}, {"p", p}, {"k", k}, {"s", s.s}, {"k_prime", s.k_prime},
                {"delta", s.delta}, {"theta_types", s.theta_types}, {"weight_bound_ok", s.weight_bound_ok},
                {"s_in_theta_types", s.s_in_theta_types}};
}

json Session::compare(const std::string& f_label, const std::string& g_label, long p, int f_index, int nmax) {
    const auto fd = descriptor(f_label);
    const auto gd = descriptor(g_label);
    check_job(p, fd.level, fd.weight, nmax);
    check_job(p, gd.level, gd.weight, nmax);
    auto f = at_prime(fd, p, f_index);
    auto g = at_prime(gd, p, 1);
    auto fpts = stage("invariants", [&] { return f.invariants(nmax); });
    auto gpts = stage("invariants", [&] { return g.invariants(nmax); });
    auto fr = report_or_points(fpts, fd.weight, p, gpts);
    auto gr = report_or_points(gpts, gd.weight, p, {});

    std::optional<ReducedSymbol> fsym, gsym;
    try {
        fsym = phi_k_reduce(f.phi(), mu_min(f.phi(), p));
        gsym = phi_k_reduce(g.phi(), mu_min(g.phi(), p));
    } catch (const Error&) {
        fsym.reset();
        gsym.reset();
    }
    std::vector<ThetaElement> f_thetas, g_thetas;
    for (int n = 1; n <= nmax; ++n) {
        f_thetas.push_back(f.theta(n));
        g_thetas.push_back(g.theta(n - 1));
    }
    std::vector<ThetaPair> pairs;
    for (size_t idx = 0; idx < f_thetas.size(); ++idx) pairs.push_back({f_thetas[idx].body, g_thetas[idx].body});
    auto v = stage("compare", [&] {
        return compare_pair(fr, gr, fsym ? &*fsym : nullptr, gsym ? &*gsym : nullptr, pairs);
    });

    json lambdas = json::array();
    for (const auto& c : v.lambdas)
        lambdas.push_back(json{{"n", c.n}, {"f", opt_json(c.lambda_f)}, {"g", opt_json(c.lambda_g)}, {"equal", c.equal}});
    json cores = json::array();
    for (const auto& c : v.corestriction)
        cores.push_back(json{{"n", c.n}, {"mu_f", opt_json(c.mu_f)}, {"congruent", c.congruent},
                             {"scalar", poly_string(c.scalar)}, {"failure", c.failure}});
    return json{{"command", "compare"},
                {"f", fd.label},
                {"g", gd.label},
                {"p", p},
                {"f_prime_index", f.prime_index()},
                {"f_slope", slope_string(f.slope())},
                {"weight_condition", theorem_b_applicable(p, fd.weight, gd.weight)},
                {"slope_condition", theorem_c_applicable(f.slope(), gd.weight)},
                {"f_pattern", to_string(fr.pattern)},
                {"lambdas", lambdas},
                {"lambdas_equal", v.lambdas_equal},
                {"symbols_compared", v.symbols_compared},
                {"symbol_scalar", v.symbol_scalar ? json(poly_string(*v.symbol_scalar)) : json(nullptr)},
                {"corestriction", cores}};
}

json Session::table(const std::vector<RowRequest>& rows, long p, int nmax) {
    std::vector<json> out(rows.size());
    std::vector<std::string> errors(rows.size());
    std::mutex next_guard;
    size_t next = 0;
    auto worker = [&] {
        for (;;) {
            size_t idx;
            {
                std::lock_guard lock(next_guard);
                if (next == rows.size()) return;
                idx = next++;
            }
            try {
                out[idx] = signed_report(rows[idx].label, p, rows[idx].table_index, nmax, 0, 0, std::nullopt);
            } catch (const Error& e) {
                // too few levels for λ♯/λ♭; still report the λ columns
                if (e.kind() == ErrorKind::InsufficientData)
                    out[idx] = invariants(rows[idx].label, p, rows[idx].table_index, nmax, 0, 0);
                else
                    errors[idx] = rows[idx].label + ": " + e.what();
            } catch (const std::exception& e) {
                errors[idx] = rows[idx].label + ": " + e.what();
            }
        }
    };
    const int n_workers = std::min<int>(cfg_.workers, std::max<size_t>(rows.size(), 1));
    std::vector<std::future<void>> pool;
    for (int w = 1; w < n_workers; ++w) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool) f.get();
    for (const auto& e : errors)
        if (!e.empty()) throw Error(ErrorKind::SchemaMismatch, "table row failed: " + e);

    json table_rows = json::array();
    for (size_t idx = 0; idx < rows.size(); ++idx) {
        const auto d = descriptor(rows[idx].label);
        json row{{"label", d.alias.empty() ? d.label : d.alias}, {"k", d.weight}, {"N", d.level},
                 {"d", d.degree}, {"i", rows[idx].table_index}, {"slope", out[idx].value("slope", "inf")},
                 {"lambda", json::array()}, {"lambda_sharp", undetermined(out[idx], "lambda_sharp")},
                 {"lambda_flat", undetermined(out[idx], "lambda_flat")}};
        for (const auto& pt : out[idx]["points"]) row["lambda"].push_back(pt["lambda"]);
        table_rows.push_back(row);
    }
    return json{{"command", "table"}, {"p", p}, {"nmax", nmax}, {"rows", table_rows}};
}

json Session::bkval(const std::string& label, long p, int table_index, int n, int nmax) {
    const auto d = descriptor(label);
    check_job(p, d.level, d.weight, std::max(n, nmax));
    // the direct side is a resultant valuation; raise the precision until it is resolved
    const int base = cfg_.precision;
    for (int precision = base;; precision *= 2) {
        try {
            FormAtPrime at(resolved(d), p, resolve_prime(d, resolved(d), p, table_index, precision), precision);
            auto pts = stage("invariants", [&] { return at.invariants(std::max(n, nmax)); });
            auto r = stage("signed", [&] { return extract_signed(pts, d.weight, p); });
            auto th = stage("theta", [&] { return at.theta(n); });
            auto bk = stage("bkval", [&] { return bk_valuation(r, n, at.ramification(), &th.body); });
            return json{{"command", "bkval"}, {"label", d.label}, {"p", p}, {"n", n},
                        {"prime_index", at.prime_index()}, {"precision", precision},
                        {"value", rational(bk.value)}, {"hypothesis_ok", bk.hypothesis_ok},
                        {"direct", bk.direct ? json(rational(*bk.direct)) : json(nullptr)},
                        {"agrees", bk.agrees}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PrecisionExhausted || precision >= 8 * base) throw;
        }
    }
}

// rendering

namespace {

std::string cell(const json& v, bool markdown) {
    if (v.is_null()) return markdown ? "∞" : "inf";
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        return markdown && s == "inf" ? "∞" : s;
    }
    return v.dump();
}

std::string render_table(const json& t, const std::string& format) {
    const bool md = format == "markdown";
    const std::string sep = md ? " | " : "\t";
    int width = 0;
    for (const auto& r : t["rows"]) width = std::max<int>(width, r["lambda"].size());
    std::vector<std::string> head{"label", "k", "N", "d", "i", "slope"};
    for (int n = 0; n < width; ++n) head.push_back(std::to_string(n));
    head.push_back(md ? "λ♯" : "lambda_sharp");
    head.push_back(md ? "λ♭" : "lambda_flat");
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        if (md) out << "| ";
        for (size_t c = 0; c < cells.size(); ++c) out << (c ? sep : "") << cells[c];
        out << (md ? " |\n" : "\n");
    };
    line(head);
    if (md) line(std::vector<std::string>(head.size(), "---"));
    for (const auto& r : t["rows"]) {
        std::vector<std::string> cells{r["label"].get<std::string>(), cell(r["k"], md), cell(r["N"], md),
                                       cell(r["d"], md), cell(r["i"], md), cell(r["slope"], md)};
        for (int n = 0; n < width; ++n) cells.push_back(n < int(r["lambda"].size()) ? cell(r["lambda"][n], md) : "");
        cells.push_back(cell(r["lambda_sharp"], md));
        cells.push_back(cell(r["lambda_flat"], md));
        line(cells);
    }
    return out.str();
}

std::string set_string(const json& values) {
    std::string out = "{";
    for (size_t idx = 0; idx < values.size(); ++idx) out += (idx ? "," : "") + values[idx].dump();
    return out + "}";
}

std::string render_text(const json& r) {
    const std::string cmd = r.value("command", "");
    std::ostringstream out;
    if (cmd == "serre") {
        out << "p=" << r["p"] << " k=" << r["k"] << " s=" << r["s"] << " delta=" << r["delta"] << "\n";
        out << set_string(r["theta_types"]) << "\n";
        return out.str();
    }
    if (cmd == "signed") {
        out << r["label"].get<std::string>() << " p=" << r["p"] << " prime " << r["prime_index"] << " slope "
            << r["slope"].get<std::string>() << "\n";
        for (const auto& pt : r["points"]) out << "  n=" << pt["n"] << " mu=" << cell(pt["mu"], false) << " lambda=" << cell(pt["lambda"], false) << "\n";
        out << "λ♯=" << cell(r["lambda_sharp"], false) << " λ♭=" << cell(r["lambda_flat"], false) << "\n";
        out << "pattern " << r["pattern"].get<std::string>() << " from n=" << r["n0"] << ", mu "
            << cell(r["mu"], false) << (r["lower_bound"]["tight"].get<bool>() ? ", lower bound tight" : "") << "\n";
        if (!r["note"].get<std::string>().empty()) out << r["note"].get<std::string>() << "\n";
        return out.str();
    }
    if (cmd == "invariants") {
        out << r["label"].get<std::string>() << " p=" << r["p"] << " prime " << r["prime_index"] << " slope "
            << r["slope"].get<std::string>() << "\n";
        for (const auto& pt : r["points"]) out << "  n=" << pt["n"] << " mu=" << cell(pt["mu"], false) << " lambda=" << cell(pt["lambda"], false) << "\n";
        return out.str();
    }
    if (cmd == "bkval") {
        out << r["label"].get<std::string>() << " n=" << r["n"] << " value " << r["value"].get<std::string>()
            << " direct " << cell(r["direct"], false) << (r["agrees"].get<bool>() ? " (agree)" : " (DIFFER)") << "\n";
        return out.str();
    }
    return r.dump(2) + "\n";
}

}  // namespace

std::string render(const json& result, const std::string& format) {
    if (format == "json") return result.dump(2) + "\n";
    if (format != "text" && format != "tsv" && format != "markdown")
        throw OutOfRange("unknown format " + format);
    if (result.value("command", "") == "table") return render_table(result, format == "markdown" ? "markdown" : "tsv");
    return render_text(result);
}

}  // namespace imt::cli
