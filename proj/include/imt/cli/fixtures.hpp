#pragma once

// Form descriptors and the on-disk fixture pack (JSON, versioned).

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imt/analysis/forms.hpp"

namespace imt::cli {

inline constexpr int kFixtureVersion = 1;

// which prime above p a table row refers to: by local index, or by slope
struct PrimeChoice {
    long p = 0;
    int table_index = 1;  // numbering used by the source table
    std::optional<int> index;
    std::string slope = "inf";
    bool operator==(const PrimeChoice&) const = default;
};

struct FormDescriptor {
    std::string label;  // N.k.x.y or a table name such as G1N7k5B
    std::string alias;
    long level = 0;
    int weight = 0;
    std::string character = "trivial";  // DirichletCharacter::parse syntax
    int degree = 1;
    std::vector<long> field_poly;       // Hecke field polynomial when known, low to high
    std::map<long, long> traces;        // trace of a_ell
    std::vector<PrimeChoice> primes;
    std::string source = "computed";    // lmfdb | fixture | computed
    bool operator==(const FormDescriptor&) const = default;

    FormSpec spec() const;
    bool matches(const std::string& name) const { return name == label || (!alias.empty() && name == alias); }
};

void to_json(nlohmann::json& j, const PrimeChoice& c);
void from_json(const nlohmann::json& j, PrimeChoice& c);
void to_json(nlohmann::json& j, const FormDescriptor& d);
void from_json(const nlohmann::json& j, FormDescriptor& d);

struct FixturePack {
    int version = kFixtureVersion;
    std::vector<FormDescriptor> forms;

    // NotFound when absent
    const FormDescriptor& find(const std::string& name) const;
    void upsert(const FormDescriptor& d);
};

// SchemaMismatch on a wrong or missing version
FixturePack load_fixtures(const std::filesystem::path& path);
void save_fixtures(const std::filesystem::path& path, const FixturePack& pack);

// temp file + rename in the same directory
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// local prime index for a row (slope lookup when no index is stored)
int resolve_prime(const FormDescriptor& d, const ResolvedForm& form, long p, int table_index, int precision);

}  // namespace imt::cli
