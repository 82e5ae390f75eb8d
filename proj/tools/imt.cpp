// imt: command-line driver for the Mazur-Tate invariant pipeline.

#include <CLI11.hpp>

#include <iostream>

#include "imt/cli/fixtures.hpp"
#include "imt/cli/session.hpp"
#include "imt/error.hpp"

using namespace imt;
using namespace imt::cli;

namespace {

struct Options {
    // configuration; only explicitly given flags override env and config file
    int precision = 40;
    std::string fixtures, cache_dir, lmfdb_url, format, config_file;
    int workers = 1;
    bool no_net = false, no_cache = false;

    long p = 5;
    std::string label, companion, forms, character = "trivial";
    int prime_index = 1, i = 0, j = 0, nmax = 3, n = 1, trunc = 0;
    long k = 0, level = 0;
    int weight = 0;
    std::string out;
    bool deep = false;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mazur-Tate elements, their Iwasawa invariants and signed invariants"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;

    auto* precision = app.add_option("--precision", o.precision, "p-adic working precision M");
    auto* fixtures = app.add_option("--fixtures", o.fixtures, "fixture pack (JSON)");
    auto* cache_dir = app.add_option("--cache-dir", o.cache_dir, "result and download cache directory");
    auto* lmfdb_url = app.add_option("--lmfdb-url", o.lmfdb_url, "LMFDB base URL");
    auto* format = app.add_option("--format", o.format, "text, tsv, markdown or json");
    auto* workers = app.add_option("--workers", o.workers, "forms computed in parallel by table");
    auto* no_net = app.add_flag("--no-net", o.no_net, "never contact the LMFDB");
    app.add_flag("--no-cache", o.no_cache, "neither read nor write the result cache");
    app.add_option("--config", o.config_file, "JSON config file (also IMT_CONFIG)");
    app.add_option("--out", o.out, "write the output to this file");

    auto form_opts = [&](CLI::App* sub) {
        sub->add_option("--label", o.label, "LMFDB or table label")->required();
        sub->add_option("--p", o.p, "prime");
        sub->add_option("--prime-index", o.prime_index, "prime above p, in the table's numbering");
        sub->add_option("--i", o.i, "power of the Teichmuller character");
        sub->add_option("--j", o.j, "component j");
    };

    auto* space = app.add_subcommand("space", "modular symbol space and its eigen-systems");
    space->add_option("--level", o.level)->required();
    space->add_option("--weight", o.weight)->required();
    space->add_option("--character", o.character);

    auto* eigen = app.add_subcommand("eigen", "Hecke eigenvalues and the slopes above p");
    form_opts(eigen);

    auto* theta = app.add_subcommand("theta", "one Mazur-Tate element");
    form_opts(theta);
    theta->add_option("--n", o.n, "level n");

    auto* invariants = app.add_subcommand("invariants", "mu and lambda of Theta_n for n <= nmax");
    form_opts(invariants);

    auto* signed_cmd = app.add_subcommand("signed", "signed lambda invariants");
    form_opts(signed_cmd);
    signed_cmd->add_option("--companion", o.companion, "weight 2 or lower weight companion form");

    auto* cmatrix = app.add_subcommand("cmatrix", "logarithmic matrix structure and signed solve");
    form_opts(cmatrix);
    cmatrix->add_option("--n", o.n, "level n");
    cmatrix->add_option("--trunc", o.trunc, "Mellin level (0: automatic headroom)");

    auto* serre = app.add_subcommand("serre", "inertia types of theta-image forms");
    serre->add_option("--p", o.p)->required();
    serre->add_option("--k", o.k)->required();

    auto* compare = app.add_subcommand("compare", "compare a congruent pair f, g");
    form_opts(compare);
    compare->add_option("--companion", o.companion, "the form g")->required();

    auto* table = app.add_subcommand("table", "lambda table for a list of forms");
    table->add_option("--p", o.p);
    table->add_option("--forms", o.forms, "form list, one label[@prime index] per line")->required();

    auto* bkval = app.add_subcommand("bkval", "valuation of Theta_n at a primitive root of unity");
    form_opts(bkval);
    bkval->add_option("--n", o.n, "level n");

    for (auto* sub : {invariants, signed_cmd, compare, table, bkval, theta}) {
        sub->add_option("--nmax", o.nmax, "largest level");
        sub->add_flag("--deep", o.deep, "allow n = 4");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        std::map<std::string, std::string> flags;
        if (precision->count()) flags["precision"] = std::to_string(o.precision);
        if (fixtures->count()) flags["fixtures"] = o.fixtures;
        if (cache_dir->count()) flags["cache-dir"] = o.cache_dir;
        if (lmfdb_url->count()) flags["lmfdb-url"] = o.lmfdb_url;
        if (format->count()) flags["format"] = o.format;
        if (workers->count()) flags["workers"] = std::to_string(o.workers);
        if (no_net->count()) flags["no-net"] = "1";
        const auto env = process_env();
        std::optional<std::filesystem::path> config_file;
        if (!o.config_file.empty()) config_file = o.config_file;
        else if (auto v = env("IMT_CONFIG")) config_file = *v;
        Config cfg = resolve_config(flags, env, config_file);
        if (o.no_cache) cfg.cache_dir.clear();

        const int top = std::max(o.nmax, o.n);
        if (top >= 4 && !o.deep && !serre->parsed() && !space->parsed())
            throw OutOfRange("n = 4 needs --deep (625-term group rings at p = 5)");

        Session s(cfg);
        nlohmann::json result;
        if (space->parsed()) result = s.space(o.level, o.weight, o.character);
        else if (eigen->parsed()) result = s.eigen(o.label, o.p);
        else if (theta->parsed()) result = s.theta(o.label, o.p, o.prime_index, o.n, o.i, o.j);
        else if (invariants->parsed()) result = s.invariants(o.label, o.p, o.prime_index, o.nmax, o.i, o.j);
        else if (signed_cmd->parsed())
            result = s.signed_report(o.label, o.p, o.prime_index, o.nmax, o.i, o.j,
                                     o.companion.empty() ? std::nullopt : std::optional(o.companion));
        else if (cmatrix->parsed()) result = s.cmatrix(o.label, o.p, o.n, o.trunc);
        else if (serre->parsed()) result = s.serre(o.p, o.k);
        else if (compare->parsed()) result = s.compare(o.label, o.companion, o.p, o.prime_index, o.nmax);
        else if (table->parsed()) result = s.table(read_form_list(o.forms), o.p, o.nmax);
        else if (bkval->parsed()) result = s.bkval(o.label, o.p, o.prime_index, o.n, o.nmax);

        const std::string text = render(result, cfg.format);
        if (o.out.empty()) std::cout << text;
        else write_atomic(o.out, text);
        return 0;
    } catch (const Error& e) {
        std::cerr << "imt: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "imt: " << e.what() << "\n";
        return 4;
    }
}
