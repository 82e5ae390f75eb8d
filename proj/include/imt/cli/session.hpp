#pragma once

// Configuration, the persistent result cache, and the computations behind each
// imt subcommand. Every command returns JSON; rendering is separate.

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imt/cli/fixtures.hpp"

namespace imt::cli {

inline constexpr const char* kCodeVersion = "imt-1";

struct Config {
    int precision = 40;
    std::filesystem::path fixtures = "fixtures/forms.json";
    std::filesystem::path cache_dir;  // empty: no cache
    std::string lmfdb_url = "https://www.lmfdb.org";
    bool no_net = false;
    std::string format = "text";
    int workers = 1;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

// flags > IMT_* environment > config file > defaults; keys are the long flag names
Config resolve_config(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                      const std::optional<std::filesystem::path>& file);

// JSON artifacts keyed by a hash of their inputs and the code version
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
    bool enabled() const { return !dir_.empty(); }
    std::optional<nlohmann::json> get(const nlohmann::json& key) const;
    void put(const nlohmann::json& key, const nlohmann::json& value) const;
    std::filesystem::path path_for(const nlohmann::json& key) const;

private:
    std::filesystem::path dir_;
};

struct RowRequest {
    std::string label;
    int table_index = 1;
};
// "label" or "label@index" per line; # starts a comment
std::vector<RowRequest> read_form_list(const std::filesystem::path& path);

class Session {
public:
    explicit Session(Config cfg);

    const Config& config() const { return cfg_; }
    const FixturePack& fixtures() const { return pack_; }

    // fixtures first, then the LMFDB unless no_net (NotFound otherwise)
    FormDescriptor descriptor(const std::string& label);

    nlohmann::json space(long level, int weight, const std::string& character);
    nlohmann::json eigen(const std::string& label, long p);
    nlohmann::json theta(const std::string& label, long p, int table_index, int n, int i, int j);
    nlohmann::json invariants(const std::string& label, long p, int table_index, int nmax, int i, int j);
    nlohmann::json signed_report(const std::string& label, long p, int table_index, int nmax, int i, int j,
                                 const std::optional<std::string>& companion);
    // mellin_level 0 picks the default headroom
    nlohmann::json cmatrix(const std::string& label, long p, int n, int mellin_level = 0);
    nlohmann::json serre(long p, long k);
    nlohmann::json compare(const std::string& f, const std::string& g, long p, int f_index, int nmax);
    nlohmann::json table(const std::vector<RowRequest>& rows, long p, int nmax);
    nlohmann::json bkval(const std::string& label, long p, int table_index, int n, int nmax);

private:
    Config cfg_;
    FixturePack pack_;
    ResultCache cache_;
    std::map<std::string, ResolvedForm> resolved_;

    const ResolvedForm& resolved(const FormDescriptor& d);
    FormAtPrime at_prime(const FormDescriptor& d, long p, int table_index);
};

// text, tsv, markdown or json
std::string render(const nlohmann::json& result, const std::string& format);

}  // namespace imt::cli
