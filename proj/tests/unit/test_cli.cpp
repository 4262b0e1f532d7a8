#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "forge/cli.hpp"
#include "forge/csv.hpp"
#include "forge/specialization.hpp"
#include "forge/trade.hpp"

using namespace forge;
using namespace forge::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FORGE_DATA_DIR;

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "forge-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& path, const std::string& text) {
    std::ofstream(path) << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Export declarations only; each row becomes one reconciled flow.
std::string flows(const std::vector<std::tuple<std::string, std::string, std::string, double>>& rows) {
    std::string s = "year,reporter,partner,product,direction,value_usd\n";
    for (int year : {2019, 2020})
        for (const auto& [exporter, importer, product, v] : rows)
            s += std::to_string(year) + "," + exporter + "," + importer + "," + product + ",export," +
                 csv::format_double(v) + "\n";
    return s;
}

fs::path make_project(const fs::path& dir, const std::string& trade, const std::string& extra = "") {
    write(dir / "trade.csv", trade);
    const auto conf = dir / "forge.conf";
    write(conf, "trade = trade.csv\n"
                "catalog = " + (kData / "catalog" / "automotive.json").string() + "\n"
                "concordance = " + (kData / "catalog" / "concordance.csv").string() + "\n"
                "region = " + (kData / "regions" / "eu27.txt").string() + "\n"
                "years = 2019-2020\n"
                "horizon = 1\n"
                "out = out\n" + extra);
    return conf;
}

// W = [[10,0],[5,5]] with DEU and FRA as the two exporters.
std::string two_country() {
    return flows({{"DEU", "FRA", "850760", 10.0}, {"FRA", "DEU", "850760", 5.0}, {"FRA", "DEU", "870380", 5.0}});
}

std::string full_ones() {
    return flows({{"DEU", "FRA", "850760", 5.0}, {"DEU", "FRA", "870380", 5.0}, {"FRA", "DEU", "850760", 7.0},
                  {"FRA", "DEU", "870380", 7.0}});
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (err_text) *err_text = err.str();
    return code;
}

std::map<std::string, std::string> header_of(const fs::path& path) {
    std::map<std::string, std::string> meta;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line) && line.starts_with("# ")) {
        auto colon = line.find(':');
        if (colon != std::string::npos) meta[line.substr(2, colon - 2)] = std::string(csv::trim(line.substr(colon + 1)));
    }
    return meta;
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    return files;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
    const auto dir = scratch("config");
    const auto conf = make_project(dir, two_country(), "efc_anchor = none\nseed = 7\n");
    const auto c = load_config(conf);
    CHECK(c.years.first == 2019);
    CHECK(c.years.last == 2020);
    CHECK(c.train_year == 2019);
    CHECK(c.base_year == 2020);
    CHECK(c.seed == 7);
    CHECK(c.efc_anchor == Anchor::None);
    CHECK(c.trade == dir / "trade.csv");
    CHECK(c.out == dir / "out");

    auto rejects = [&](const std::string& extra) {
        write(conf, slurp(conf) + extra);
        bool validation = false;
        try {
            load_config(conf);
        } catch (const ForgeError& e) {
            validation = is_validation_error(e.kind());
        }
        make_project(dir, two_country());
        return validation;
    };
    CHECK(rejects("unknown_key = 1\n"));
    CHECK(rejects("years = 2019-2020\n"));  // duplicate
    CHECK(rejects("no equals sign\n"));
    CHECK(rejects("rca_threshold = abc\n"));
    CHECK(rejects("efc_anchor = sideways\n"));

    std::istringstream missing("trade = t.csv\n");
    CHECK_THROWS_AS(parse_config(missing, dir), ForgeError);

    write(conf, "trade = nowhere.csv\ncatalog = a\nconcordance = b\nregion = c\nyears = 2019-2020\nhorizon = 1\n");
    CHECK_THROWS_AS(load_config(conf), ForgeError);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    const auto conf = make_project(dir, two_country()).string();
    std::string err;

    CHECK(run({"--version"}) == 0);
    CHECK(run({"bogus", "--config", conf}) == 1);
    CHECK(run({"rca"}) == 1);  // --config is required
    CHECK(run({"rca", "--config", (dir / "absent.conf").string()}) == 1);

    // Downstream before upstream: the message names what to run.
    CHECK(run({"rca", "--config", conf}, &err) == 1);
    CHECK(err.find("forge ingest") != std::string::npos);
    CHECK(run({"vulnerability", "--config", conf}, &err) == 1);

    CHECK(run({"ingest", "--config", conf}) == 0);
    CHECK(run({"rca", "--config", conf}) == 0);
    CHECK(run({"rca", "--config", conf, "--year", "2030"}) == 1);
    CHECK(run({"vulnerability", "--config", conf}, &err) == 1);
    CHECK(err.find("forge progression") != std::string::npos);

    // Well-formed inputs, but no catalogue input is traded: a computation failure.
    const auto dir2 = scratch("exit-computation");
    const auto conf2 = make_project(dir2, flows({{"DEU", "FRA", "010121", 3.0}, {"FRA", "DEU", "030211", 4.0}}));
    CHECK(run({"ingest", "--config", conf2.string()}) == 0);
    CHECK(run({"rca", "--config", conf2.string()}) == 0);
    CHECK(run({"fitness", "--config", conf2.string()}, &err) == 2);
}

TEST_CASE("rca on the two-country fixture") {
    const auto dir = scratch("rca");
    const auto conf = make_project(dir, two_country()).string();
    REQUIRE(run({"ingest", "--config", conf}) == 0);
    REQUIRE(run({"rca", "--config", conf, "--year", "2020"}) == 0);
    const auto rca = csv::read_matrix(dir / "out" / "rca" / "rca_2020.csv");
    REQUIRE(rca.row_labels() == std::vector<std::string>{"DEU", "FRA"});
    REQUIRE(rca.col_labels() == std::vector<std::string>{"850760", "870380"});
    CHECK(std::abs(rca(0, 0) - 4.0 / 3.0) <= 1e-12);
    CHECK(rca(0, 1) == 0.0);
    CHECK(std::abs(rca(1, 0) - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(rca(1, 1) - 2.0) <= 1e-12);

    const auto m = csv::read_matrix(dir / "out" / "rca" / "m_2020.csv");
    CHECK(std::vector<double>(m.data().begin(), m.data().end()) == std::vector<double>{1, 0, 0, 1});
    CHECK_FALSE(fs::exists(dir / "out" / "rca" / "rca_2019.csv"));
}

TEST_CASE("fitness on the full-ones fixture") {
    const auto dir = scratch("ones");
    const auto conf = make_project(dir, full_ones()).string();
    REQUIRE(run({"ingest", "--config", conf}) == 0);
    REQUIRE(run({"rca", "--config", conf}) == 0);
    REQUIRE(run({"fitness", "--config", conf}) == 0);
    for (const char* name : {"fitness_2020.csv", "complexity_2020.csv"}) {
        std::ifstream in(dir / "out" / "fitness" / name);
        csv::LineReader reader(in);
        std::string line;
        REQUIRE(reader.next(line));  // header
        int rows = 0;
        while (reader.next(line)) {
            CHECK(csv::parse_double(csv::split_line(line)[2]) == 1.0);
            ++rows;
        }
        CHECK(rows == 2);
    }
}

TEST_CASE("metadata headers and caching") {
    const auto dir = scratch("meta");
    const auto conf = make_project(dir, full_ones()).string();
    for (const char* cmd : {"ingest", "rca", "fitness", "trends"}) REQUIRE(run({cmd, "--config", conf}) == 0);

    for (const auto& [rel, body] : tree(dir / "out")) {
        if (rel.ends_with(".stage")) continue;
        if (rel.ends_with(".json")) {
            CHECK(body.find("\"metadata\"") != std::string::npos);
            CHECK(body.find("\"inputs-hash\"") != std::string::npos);
            continue;
        }
        const auto meta = header_of(dir / "out" / rel);
        INFO(rel);
        CHECK(meta.count("forge-version"));
        CHECK(meta.count("inputs-hash"));
        CHECK(meta.at("seed") == "42");
    }

    // Same inputs: the stage is skipped. A new seed changes the hash.
    std::ostringstream out, err;
    CHECK(run_cli({"rca", "--config", conf}, out, err) == 0);
    CHECK(out.str().find("cached") != std::string::npos);
    const auto before = header_of(dir / "out" / "rca" / "rca_2020.csv");
    CHECK(run({"rca", "--config", conf, "--seed", "9"}) == 0);
    const auto after = header_of(dir / "out" / "rca" / "rca_2020.csv");
    CHECK(after.at("seed") == "9");
    CHECK(after.at("inputs-hash") != before.at("inputs-hash"));

    // Changing an upstream artifact invalidates the downstream cache.
    write(dir / "trade.csv", two_country());
    CHECK(run({"ingest", "--config", conf}) == 0);
    CHECK(run({"rca", "--config", conf}) == 0);
    std::ostringstream out2;
    CHECK(run_cli({"fitness", "--config", conf}, out2, err) == 0);
    CHECK(out2.str().find("cached") == std::string::npos);

    // A deleted output forces a rerun even with a matching key.
    fs::remove(dir / "out" / "fitness" / "fitness_2019.csv");
    CHECK(run({"fitness", "--config", conf}) == 0);
    CHECK(fs::exists(dir / "out" / "fitness" / "fitness_2019.csv"));
}

TEST_CASE("outputs round-trip") {
    const auto dir = scratch("roundtrip");
    const auto conf = make_project(dir, two_country()).string();
    REQUIRE(run({"ingest", "--config", conf}) == 0);
    REQUIRE(run({"rca", "--config", conf}) == 0);

    const auto records = parse_flows(dir / "trade.csv");
    const auto expected = reconcile_mirror_flows(records, ReconciliationStrategy::importer_priority(), 2012);
    std::ifstream in(dir / "out" / "ingest" / "tensor.csv");
    CHECK(read_tensor(in, 2012) == expected);

    const auto rca = compute_rca(aggregate_exports(expected, 2019), 2019);
    const auto back = csv::read_matrix(dir / "out" / "rca" / "rca_2019.csv");
    CHECK(back.row_labels() == rca.values.row_labels());
    CHECK(std::ranges::equal(back.data(), rca.values.data()));
}

TEST_CASE("bundled fixture pipeline is reproducible") {
    const auto a = scratch("bundled-a"), b = scratch("bundled-b");
    const auto conf = (kData / "fixtures" / "pipeline.conf").string();
    for (const auto& name : command_names()) {
        INFO(name);
        REQUIRE(run({name, "--config", conf, "--out", a.string()}) == 0);
        REQUIRE(run({name, "--config", conf, "--out", b.string()}) == 0);
    }
    const auto ta = tree(a), tb = tree(b);
    CHECK(ta.size() > 40);
    CHECK(ta == tb);
}

} // TEST_SUITE
