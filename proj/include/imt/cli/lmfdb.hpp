#pragma once

// Newform descriptors from the LMFDB API (mf_newforms collection), cached as JSON.

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "imt/cli/fixtures.hpp"

namespace imt::cli {

// one record of /api/mf_newforms/; traces of a_ell are kept for primes ell <= ell_max
FormDescriptor parse_lmfdb_newform(const nlohmann::json& record, long ell_max = 13);
// char_values = [modulus, order, generators, exponents] in DirichletCharacter::parse syntax
std::string character_spec(const nlohmann::json& char_values);

struct FetchResult {
    FormDescriptor descriptor;
    std::string content_hash;
    bool from_cache = false;
};

class LmfdbClient {
public:
    // base_url like https://www.lmfdb.org; the cache directory may be empty (no cache)
    LmfdbClient(std::string base_url, std::filesystem::path cache_dir, int attempts = 3,
                std::chrono::milliseconds backoff = std::chrono::milliseconds(250));

    // NotFound for an unknown label, SchemaMismatch for a malformed reply,
    // NetworkError after the last failed attempt
    FetchResult fetch_form(const std::string& label);

    int requests_made() const { return requests_; }

private:
    std::string base_url_;
    std::filesystem::path cache_dir_;
    int attempts_;
    std::chrono::milliseconds backoff_;
    int requests_ = 0;

    std::string get(const std::string& path);
};

// SHA-256 of the bytes, in hex
std::string content_hash(const std::string& bytes);

}  // namespace imt::cli
