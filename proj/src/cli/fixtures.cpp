#include "imt/cli/fixtures.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "imt/error.hpp"

namespace imt::cli {

using nlohmann::json;

FormSpec FormDescriptor::spec() const {
    FormSpec s;
    s.label = label;
    s.alias = alias;
    s.level = level;
    s.weight = weight;
    s.character = character;
    s.degree = degree;
    s.traces = traces;
    return s;
}

void to_json(json& j, const PrimeChoice& c) {
    j = json{{"p", c.p}, {"table_index", c.table_index}, {"slope", c.slope}};
    if (c.index) j["index"] = *c.index;
}

void from_json(const json& j, PrimeChoice& c) {
    c.p = j.at("p").get<long>();
    c.table_index = j.value("table_index", 1);
    c.slope = j.value("slope", std::string("inf"));
    c.index = j.contains("index") ? std::optional<int>(j.at("index").get<int>()) : std::nullopt;
}

void to_json(json& j, const FormDescriptor& d) {
    json traces = json::object();
    for (auto [ell, t] : d.traces) traces[std::to_string(ell)] = t;
    j = json{{"label", d.label},         {"alias", d.alias},   {"level", d.level},
             {"weight", d.weight},       {"character", d.character}, {"degree", d.degree},
             {"field_poly", d.field_poly}, {"traces", traces}, {"primes", d.primes},
             {"source", d.source}};
}

void from_json(const json& j, FormDescriptor& d) {
    try {
        d.label = j.at("label").get<std::string>();
        d.alias = j.value("alias", std::string());
        d.level = j.at("level").get<long>();
        d.weight = j.at("weight").get<int>();
        d.character = j.value("character", std::string("trivial"));
        d.degree = j.at("degree").get<int>();
        d.field_poly = j.value("field_poly", std::vector<long>{});
        d.traces.clear();
        const json traces = j.value("traces", json::object());
        for (auto& [k, v] : traces.items()) d.traces[std::stol(k)] = v.get<long>();
        d.primes = j.value("primes", std::vector<PrimeChoice>{});
        d.source = j.value("source", std::string("fixture"));
    } catch (const json::exception& e) {
        throw SchemaMismatch(std::string("form descriptor: ") + e.what());
    }
}

const FormDescriptor& FixturePack::find(const std::string& name) const {
    for (const auto& d : forms)
        if (d.matches(name)) return d;
    throw NotFound("no fixture for " + name);
}

void FixturePack::upsert(const FormDescriptor& d) {
    for (auto& e : forms)
        if (e.label == d.label) {
            e = d;
            return;
        }
    forms.push_back(d);
}

FixturePack load_fixtures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot read fixtures " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaMismatch(path.string() + ": " + e.what());
    }
    if (!j.contains("version") || j["version"] != kFixtureVersion)
        throw SchemaMismatch(path.string() + ": expected fixture version " + std::to_string(kFixtureVersion));
    FixturePack pack;
    pack.forms = j.value("forms", std::vector<FormDescriptor>{});
    return pack;
}

void save_fixtures(const std::filesystem::path& path, const FixturePack& pack) {
    json j{{"version", pack.version}, {"forms", pack.forms}};
    write_atomic(path, j.dump(2) + "\n");
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::random_device rd;
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary);
        out << contents;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

int resolve_prime(const FormDescriptor& d, const ResolvedForm& form, long p, int table_index, int precision) {
    for (const auto& c : d.primes) {
        if (c.p != p || c.table_index != table_index) continue;
        if (c.index) return *c.index;
        return prime_index_for_slope(form, p, parse_slope(c.slope), precision);
    }
    return table_index;
}

}  // namespace imt::cli
