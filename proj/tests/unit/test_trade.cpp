#include "doctest.h"

#include <sstream>

#include "forge/trade.hpp"

using namespace forge;

namespace {

const char* kHeader = "year,reporter,partner,product,direction,value_usd\n";

std::vector<TradeFlowRecord> parse(const std::string& body) {
    std::istringstream in(std::string(kHeader) + body);
    return parse_flows(in);
}

ErrorKind kind_of(const std::string& body, std::size_t* line = nullptr) {
    try {
        parse(body);
    } catch (const ForgeError& e) {
        if (line) *line = e.line();
        return e.kind();
    }
    FAIL("expected a parse failure");
    return ErrorKind::Computation;
}

} // namespace

TEST_SUITE("trade") {

TEST_CASE("parses a well-formed file") {
    auto rows = parse("2020,DEU,CHN,870899,export,1500.5\n# note\n\n2020,CHN,DEU,870899,import,10\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == TradeFlowRecord{2020, "DEU", "CHN", "870899", FlowDirection::Export, 1500.5});
    CHECK(rows[1].direction == FlowDirection::Import);
}

TEST_CASE("empty input yields no records") {
    std::istringstream in("");
    CHECK(parse_flows(in).empty());
}

TEST_CASE("rejects bad rows with their line number") {
    std::size_t line = 0;
    CHECK(kind_of("2020,DEU,CHN,870899,export,1\n2020,DEU,CHN,870899,export,-3\n", &line) == ErrorKind::NegativeValue);
    CHECK(line == 3);
    CHECK(kind_of("2020,XXX,CHN,870899,export,1\n") == ErrorKind::UnknownCode);
    CHECK(kind_of("2020,DEU,CHN,8708,export,1\n") == ErrorKind::UnknownCode);
    CHECK(kind_of("2020,DEU,DEU,870899,export,1\n") == ErrorKind::Parse);
    CHECK(kind_of("20x0,DEU,CHN,870899,export,1\n") == ErrorKind::Parse);
    CHECK(kind_of("2020,DEU,CHN,870899,sideways,1\n") == ErrorKind::Parse);
    CHECK(kind_of("2020,DEU,CHN,870899,export\n") == ErrorKind::Parse);

    std::istringstream no_header("2020,DEU,CHN,870899,export,1\n");
    CHECK_THROWS_AS(parse_flows(no_header), ForgeError);
}

TEST_CASE("extra country codes can be whitelisted") {
    std::istringstream in(std::string(kHeader) + "2020,S19,CHN,870899,export,1\n");
    ParseOptions o;
    o.extra_country_codes = {"S19"};
    CHECK(parse_flows(in, o).size() == 1);
}

TEST_CASE("mirror reconciliation strategies") {
    std::vector<TradeFlowRecord> recs{
        {2020, "DEU", "CHN", "870899", FlowDirection::Export, 100},
        {2020, "CHN", "DEU", "870899", FlowDirection::Import, 80},
        {2020, "FRA", "USA", "870899", FlowDirection::Export, 7},   // export side only
        {2020, "USA", "ITA", "870899", FlowDirection::Import, 5},   // import side only
        {2020, "USA", "ITA", "870899", FlowDirection::Import, 1},   // duplicate declaration sums
    };
    const TradeKey k{2020, "DEU", "CHN", "870899"};
    CHECK(reconcile_mirror_flows(recs, ReconciliationStrategy::importer_priority()).value(k) == 80);
    CHECK(reconcile_mirror_flows(recs, ReconciliationStrategy::exporter_priority()).value(k) == 100);
    CHECK(reconcile_mirror_flows(recs, ReconciliationStrategy::weighted_average(0.25)).value(k) ==
          doctest::Approx(85.0));
    CHECK(reconcile_mirror_flows(recs, ReconciliationStrategy::parse("weighted_average:0.5")).value(k) ==
          doctest::Approx(90.0));
    auto custom = ReconciliationStrategy::custom("max", [](double e, double i) { return std::max(e, i); });
    auto t = reconcile_mirror_flows(recs, custom);
    CHECK(t.value(k) == 100);
    CHECK(t.value({2020, "FRA", "USA", "870899"}) == 7);
    CHECK(t.value({2020, "ITA", "USA", "870899"}) == 6);
    CHECK(t.size() == 3);
    CHECK_THROWS_AS(ReconciliationStrategy::parse("median"), ForgeError);
    CHECK_THROWS_AS(ReconciliationStrategy::weighted_average(1.5), ForgeError);
}

TEST_CASE("aggregate exports shares one universe across years") {
    TradeTensor t(2012);
    t.add({2019, "DEU", "CHN", "a"}, 1);
    t.add({2019, "DEU", "USA", "a"}, 2);
    t.add({2020, "FRA", "CHN", "b"}, 4);
    auto w = aggregate_exports(t, 2019);
    CHECK(w.row_labels() == std::vector<std::string>{"DEU", "FRA"});
    CHECK(w.col_labels() == std::vector<std::string>{"a", "b"});
    CHECK(w.at("DEU", "a") == 3);
    CHECK(w.at("FRA", "b") == 0);
    CHECK_THROWS_AS(aggregate_exports(t, 2018), ForgeError);
    CHECK_THROWS_AS(t.add({2019, "DEU", "CHN", "a"}, -1), ForgeError);
}

TEST_CASE("tensor csv round-trip") {
    TradeTensor t(2017);
    t.add({2020, "DEU", "CHN", "870899"}, 1.0 / 3.0);
    t.add({2021, "CHN", "DEU", "401110"}, 12345.678);
    std::stringstream ss;
    write_tensor(ss, t);
    CHECK(read_tensor(ss, 2017) == t);
}

}
