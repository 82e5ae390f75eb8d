#include <doctest.h>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <atomic>
#include <fstream>
#include <thread>

#include "imt/cli/fixtures.hpp"
#include "imt/cli/lmfdb.hpp"
#include "imt/cli/session.hpp"
#include "imt/error.hpp"

using namespace imt;
using namespace imt::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("imt-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const fs::path kFixtures = fs::path(IMT_SOURCE_DIR) / "fixtures" / "forms.json";

// a trimmed mf_newforms record for 27.4.a.b
json sample_record() {
    std::vector<long> traces(30, 0);
    traces[0] = 1;
    traces[1] = 3;
    traces[4] = 15;
    traces[6] = -25;
    return json{{"label", "27.4.a.b"}, {"level", 27}, {"weight", 4}, {"dim", 1},
                {"char_values", json::array({27, 1, json::array({2}), json::array({0})})},
                {"field_poly", json::array({0, 1})}, {"traces", traces}};
}

class FakeLmfdb {
public:
    explicit FakeLmfdb(int failures_before_success) : failures_(failures_before_success) {
        server_.Get("/api/mf_newforms/", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            const auto label = req.get_param_value("label");
            if (label == "404.2.a.a") {
                res.status = 404;
                return;
            }
            if (failures_ > 0) {
                --failures_;
                res.status = 503;
                return;
            }
            json data = json::array();
            if (label == "27.4.a.b") data.push_back(sample_record());
            res.set_content(json{{"data", data}}.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeLmfdb() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::atomic<int> hits{0};

private:
    httplib::Server server_;
    int port_ = 0;
    int failures_;
    std::thread thread_;
};

}  // namespace

TEST_CASE("fixture pack round trip") {
    auto dir = scratch_dir("fixtures");
    FixturePack pack = load_fixtures(kFixtures);
    REQUIRE(pack.forms.size() >= 15);
    for (const char* name : {"27.4.a.b", "G0N27k4A", "G1N23k7B", "4.17.b.b", "G1N13k2A"})
        CHECK_NOTHROW(pack.find(name));
    CHECK_THROWS_AS(pack.find("99.2.a.a"), NotFound);

    save_fixtures(dir / "pack.json", pack);
    auto back = load_fixtures(dir / "pack.json");
    CHECK(back.forms == pack.forms);

    std::ofstream(dir / "old.json") << R"({"version": 0, "forms": []})";
    CHECK_THROWS_AS(load_fixtures(dir / "old.json"), SchemaMismatch);
    std::ofstream(dir / "bad.json") << R"({"version": 1, "forms": [{"label": "x"}]})";
    CHECK_THROWS_AS(load_fixtures(dir / "bad.json"), SchemaMismatch);
    fs::remove_all(dir);
}

TEST_CASE("parsing newform records") {
    auto d = parse_lmfdb_newform(sample_record());
    CHECK(d.label == "27.4.a.b");
    CHECK(d.level == 27);
    CHECK(d.weight == 4);
    CHECK(d.degree == 1);
    CHECK(d.character == "trivial");
    CHECK(d.traces.at(5) == 15);
    CHECK(d.traces.at(2) == 3);
    CHECK(d.traces.count(3) == 0);  // 3 divides the level
    CHECK(d.source == "lmfdb");

    CHECK(character_spec(json::array({4, 2, json::array({3}), json::array({1})})) == "order:2;3=1");
    CHECK(character_spec(json::array({13, 6, json::array({2}), json::array({1})})) == "order:6;2=1");
    CHECK_THROWS_AS(character_spec(json::array({4, 2})), SchemaMismatch);
    auto broken = sample_record();
    broken.erase("weight");
    CHECK_THROWS_AS(parse_lmfdb_newform(broken), SchemaMismatch);
}

TEST_CASE("LMFDB client retries, caches and reports failures") {
    auto dir = scratch_dir("lmfdb");
    FakeLmfdb server(2);
    LmfdbClient client(server.url(), dir, 3, std::chrono::milliseconds(1));

    auto first = client.fetch_form("27.4.a.b");
    CHECK(client.requests_made() == 3);  // two 503 replies, then success
    CHECK_FALSE(first.from_cache);
    CHECK(first.descriptor.traces.at(5) == 15);
    CHECK(fs::exists(dir / "lmfdb-27.4.a.b.json"));
    const auto stamp = fs::last_write_time(dir / "lmfdb-27.4.a.b.json");

    auto again = client.fetch_form("27.4.a.b");
    CHECK(again.from_cache);
    CHECK(again.content_hash == first.content_hash);
    CHECK(again.descriptor == first.descriptor);
    CHECK(fs::last_write_time(dir / "lmfdb-27.4.a.b.json") == stamp);

    CHECK_THROWS_AS(client.fetch_form("1.2.a.a"), NotFound);
    const int before = client.requests_made();
    CHECK_THROWS_AS(client.fetch_form("404.2.a.a"), NotFound);
    CHECK(client.requests_made() == before + 1);  // a 404 is not retried

    // nothing listens on port 9 of localhost: the cached copy is used, or the error surfaces
    LmfdbClient offline("http://127.0.0.1:9", dir, 2, std::chrono::milliseconds(1));
    auto cached = offline.fetch_form("27.4.a.b");
    CHECK(cached.from_cache);
    CHECK(offline.requests_made() == 2);
    LmfdbClient offline_bare("http://127.0.0.1:9", {}, 2, std::chrono::milliseconds(1));
    CHECK_THROWS_AS(offline_bare.fetch_form("27.4.a.b"), NetworkError);
    fs::remove_all(dir);
}

TEST_CASE("atomic writes are never seen half done") {
    auto dir = scratch_dir("atomic");
    const auto path = dir / "artifact.json";
    write_atomic(path, "{}");
    std::atomic<bool> done{false};
    std::atomic<int> bad{0}, reads{0};
    std::thread reader([&] {
        while (!done) {
            std::ifstream in(path);
            if (json::parse(in, nullptr, false).is_discarded()) ++bad;
            ++reads;
        }
    });
    std::vector<std::thread> writers;
    for (int w = 0; w < 3; ++w)
        writers.emplace_back([&, w] {
            for (int r = 0; r < 50; ++r) write_atomic(path, json{{"w", w}, {"pad", std::string(20000, 'x')}}.dump());
        });
    for (auto& t : writers) t.join();
    done = true;
    reader.join();
    CHECK(bad == 0);
    CHECK(reads > 0);
    int leftovers = 0;
    for (const auto& e : fs::directory_iterator(dir)) leftovers += e.path() != path;
    CHECK(leftovers == 0);
    fs::remove_all(dir);
}

TEST_CASE("configuration precedence") {
    auto dir = scratch_dir("config");
    std::ofstream(dir / "imt.json") << R"({"precision": 50, "format": "tsv", "workers": 2, "no-net": true})";
    std::map<std::string, std::string> env{{"IMT_PRECISION", "60"}, {"IMT_FORMAT", "markdown"}};
    EnvLookup lookup = [&](const std::string& k) -> std::optional<std::string> {
        auto it = env.find(k);
        return it == env.end() ? std::nullopt : std::optional(it->second);
    };

    auto from_file = resolve_config({}, {}, dir / "imt.json");
    CHECK(from_file.precision == 50);
    CHECK(from_file.format == "tsv");
    CHECK(from_file.workers == 2);
    CHECK(from_file.no_net);

    auto with_env = resolve_config({}, lookup, dir / "imt.json");
    CHECK(with_env.precision == 60);
    CHECK(with_env.format == "markdown");
    CHECK(with_env.workers == 2);

    auto with_flags = resolve_config({{"precision", "70"}}, lookup, dir / "imt.json");
    CHECK(with_flags.precision == 70);
    CHECK(with_flags.format == "markdown");

    CHECK(resolve_config({}, {}, std::nullopt).precision == 40);
    CHECK_THROWS_AS(resolve_config({{"precision", "many"}}, {}, std::nullopt), SchemaMismatch);
    CHECK_THROWS_AS(resolve_config({}, {}, dir / "absent.json"), NotFound);
    fs::remove_all(dir);
}

TEST_CASE("form lists") {
    auto dir = scratch_dir("lists");
    std::ofstream(dir / "t.txt") << "# header\nG0N14k2A\n\nG1N13k2A@2  # second prime\n";
    auto rows = read_form_list(dir / "t.txt");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].label == "G0N14k2A");
    CHECK(rows[0].table_index == 1);
    CHECK(rows[1].label == "G1N13k2A");
    CHECK(rows[1].table_index == 2);
    fs::remove_all(dir);
}

TEST_CASE("jobs are deterministic and the cache is faithful") {
    auto dir = scratch_dir("jobs");
    Config cfg;
    cfg.fixtures = kFixtures;
    cfg.no_net = true;
    cfg.cache_dir = dir / "cache";
    cfg.workers = 2;
    const std::vector<RowRequest> rows{{"G0N14k2A", 1}, {"G1N7k3A", 1}, {"27.4.a.b", 1}};

    Session cached(cfg);
    const auto first = render(cached.table(rows, 5, 3), "tsv");
    const auto second = render(Session(cfg).table(rows, 5, 3), "tsv");
    CHECK(first == second);
    int files = 0;
    for (const auto& e : fs::directory_iterator(cfg.cache_dir)) files += e.path().extension() == ".json";
    CHECK(files == 3);

    Config fresh = cfg;
    fresh.cache_dir.clear();
    CHECK(render(Session(fresh).table(rows, 5, 3), "tsv") == first);
    CHECK(first.find("G1N7k3A\t3\t7\t1\t1\tinf\t0\t1\t8\t41\t0\t1") != std::string::npos);

    auto md = render(cached.table(rows, 5, 3), "markdown");
    CHECK(md.find("| G0N27k4A | 4 | 27 | 1 | 1 | 1 | 0 | 2 | 12 | 62 | 0 | 2 |") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("session commands and error stages") {
    Config cfg;
    cfg.fixtures = kFixtures;
    cfg.no_net = true;
    Session s(cfg);

    auto serre = s.serre(7, 36);
    CHECK(serre["theta_types"] == json::array({11, 17, 29, 35}));

    auto r = s.signed_report("27.4.a.b", 5, 1, 3, 0, 0, std::nullopt);
    CHECK(r["lambda_sharp"] == 0);
    CHECK(r["lambda_flat"] == 2);
    CHECK(r["lower_bound"]["tight"] == true);

    try {
        s.descriptor("99.2.a.a");
        FAIL("expected NotFound");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotFound);
    }
    CHECK_THROWS_AS(s.invariants("27.4.a.b", 13, 1, 2, 0, 0), OutOfRange);
    CHECK_THROWS_AS(s.invariants("27.4.a.b", 5, 1, 5, 0, 0), OutOfRange);

    // a descriptor no eigen-system matches: the failure names its stage
    FixturePack pack = s.fixtures();
    FormDescriptor bogus = pack.find("27.4.a.b");
    bogus.label = "bogus";
    bogus.alias.clear();
    bogus.degree = 3;
    pack.upsert(bogus);
    auto dir = scratch_dir("stages");
    save_fixtures(dir / "pack.json", pack);
    cfg.fixtures = dir / "pack.json";
    Session t(cfg);
    try {
        t.invariants("bogus", 5, 1, 2, 0, 0);
        FAIL("expected NotFound");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotFound);
        CHECK(std::string(e.what()).find("[stage eigen_decompose]") != std::string::npos);
    }
    fs::remove_all(dir);
}
