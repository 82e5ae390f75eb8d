#include "imt/cli/lmfdb.hpp"

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "imt/error.hpp"

namespace imt::cli {

using nlohmann::json;

namespace {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

std::string content_hash(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr))
        throw std::runtime_error("SHA-256 failed");
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < length; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        out += buf;
    }
    return out;
}

std::string character_spec(const json& cv) {
    if (!cv.is_array() || cv.size() != 4) throw SchemaMismatch("char_values must have four entries");
    const long order = cv[1].get<long>();
    if (order == 1) return "trivial";
    const auto& gens = cv[2];
    const auto& exps = cv[3];
    if (gens.size() != exps.size()) throw SchemaMismatch("char_values generators and values differ in length");
    std::string out = "order:" + std::to_string(order) + ";";
    for (size_t i = 0; i < gens.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(gens[i].get<long>()) + "=" + std::to_string(exps[i].get<long>());
    }
    return out;
}

FormDescriptor parse_lmfdb_newform(const json& r, long ell_max) {
    FormDescriptor d;
    try {
        d.label = r.at("label").get<std::string>();
        d.level = r.at("level").get<long>();
        d.weight = r.at("weight").get<int>();
        d.degree = r.at("dim").get<int>();
        d.character = r.contains("char_values") ? character_spec(r.at("char_values")) : "trivial";
        if (r.contains("field_poly") && r.at("field_poly").is_array())
            d.field_poly = r.at("field_poly").get<std::vector<long>>();
        const auto& traces = r.at("traces");  // traces[n-1] = trace of a_n
        for (long ell = 2; ell <= ell_max; ++ell)
            if (is_prime(ell) && ell <= static_cast<long>(traces.size()) && d.level % ell != 0)
                d.traces[ell] = traces[ell - 1].get<long>();
    } catch (const json::exception& e) {
        throw SchemaMismatch(std::string("LMFDB newform record: ") + e.what());
    }
    d.source = "lmfdb";
    return d;
}

LmfdbClient::LmfdbClient(std::string base_url, std::filesystem::path cache_dir, int attempts,
                         std::chrono::milliseconds backoff)
    : base_url_(std::move(base_url)), cache_dir_(std::move(cache_dir)), attempts_(attempts), backoff_(backoff) {}

std::string LmfdbClient::get(const std::string& path) {
    std::string last_error = "no attempt made";
    auto wait = backoff_;
    for (int attempt = 0; attempt < attempts_; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(wait);
            wait *= 2;
        }
        ++requests_;
        httplib::Client client(base_url_);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        auto res = client.Get(path);
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 404) throw NotFound("LMFDB returned 404 for " + path);
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) throw NetworkError("HTTP " + std::to_string(res->status) + " for " + path);
        return res->body;
    }
    throw NetworkError(last_error + " after " + std::to_string(attempts_) + " attempts");
}

FetchResult LmfdbClient::fetch_form(const std::string& label) {
    const auto cache_file = cache_dir_.empty() ? std::filesystem::path() : cache_dir_ / ("lmfdb-" + label + ".json");
    std::optional<json> cached;
    if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
        std::ifstream in(cache_file);
        cached = json::parse(in, nullptr, false);
        if (cached->is_discarded()) cached.reset();
    }

    std::string body;
    try {
        body = get("/api/mf_newforms/?label=" + label + "&_format=json");
    } catch (const NetworkError&) {
        if (!cached) throw;
        return {cached->at("descriptor").get<FormDescriptor>(), cached->at("hash").get<std::string>(), true};
    }
    const std::string hash = content_hash(body);
    if (cached && cached->value("hash", std::string()) == hash)
        return {cached->at("descriptor").get<FormDescriptor>(), hash, true};

    json reply = json::parse(body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("data") || !reply["data"].is_array())
        throw SchemaMismatch("LMFDB reply without a data array");
    if (reply["data"].empty()) throw NotFound("LMFDB has no newform " + label);
    FetchResult out{parse_lmfdb_newform(reply["data"][0]), hash, false};
    if (!cache_file.empty())
        write_atomic(cache_file, json{{"version", kFixtureVersion}, {"hash", hash}, {"descriptor", out.descriptor}}.dump(2));
    return out;
}

}  // namespace imt::cli
