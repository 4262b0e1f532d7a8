#include "doctest.h"

#include <random>
#include <sstream>

#include "forge/io_analysis.hpp"

using namespace forge;

namespace {

RegionDefinition eu() { return {"EU", {"DEU", "FRA"}}; }

RegionSectorInputs three_origins() {
    RegionSectorInputs in;
    in.year = 2020;
    in.region = eu();
    in.sector = "C29";
    in.purchases = {{{"CHN", "C29"}, 50.0}, {{"USA", "C29"}, 46.0}, {{"JPN", "C29"}, 4.0}};
    return in;
}

} // namespace

TEST_SUITE("io_analysis") {

TEST_CASE("three-origin fixture") {
    auto t = partner_shares(three_origins(), SupplierScope::SameSector, 0.05);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].key == "CHN");
    CHECK(t.rows[0].share == doctest::Approx(0.50).epsilon(1e-12));
    CHECK(t.rows[1].key == "USA");
    CHECK(t.rows[1].share == doctest::Approx(0.46).epsilon(1e-12));
    CHECK(t.rows[2].is_other);
    CHECK(t.other_share == doctest::Approx(0.04).epsilon(1e-12));
    double sum = 0.0;
    for (const auto& r : t.rows) sum += r.share;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("threshold is inclusive and measured against total inputs by default") {
    auto in = three_origins();
    in.purchases[{"DEU", "C29"}] = 100.0;  // intra-region
    // JPN: 4 / 200 = 0.02 of all inputs, 4 / 100 = 0.04 of extra-region inputs
    auto total_base = partner_shares(in, SupplierScope::SameSector, 0.02);
    CHECK(total_base.share_of("JPN") == doctest::Approx(0.04));
    auto extra_base = partner_shares(in, SupplierScope::SameSector, 0.02, ThresholdBase::ExtraRegion);
    CHECK(extra_base.share_of("JPN") == doctest::Approx(0.04));
    auto cut = partner_shares(in, SupplierScope::SameSector, 0.03);
    CHECK(cut.share_of("JPN") == 0.0);
    CHECK(cut.other_share == doctest::Approx(0.04));
}

TEST_CASE("threshold sweep is monotone and shares stay additive") {
    std::mt19937_64 rng(2);
    RegionSectorInputs in;
    in.year = 2018;
    in.region = eu();
    in.sector = "C29";
    const char* partners[] = {"CHN", "USA", "JPN", "KOR", "TUR", "GBR", "MEX", "CHE", "IND", "BRA"};
    for (const char* p : partners) {
        in.purchases[{p, "C29"}] = std::uniform_real_distribution<double>(0.1, 10)(rng);
        in.purchases[{p, "C26"}] = std::uniform_real_distribution<double>(0.1, 10)(rng);
    }
    in.purchases[{"FRA", "C29"}] = 30;
    for (auto scope : {SupplierScope::SameSector, SupplierScope::OtherSectors, SupplierScope::AllSectors}) {
        std::size_t prev_named = 1000;
        double prev_other = -1.0;
        for (double th = 0.01; th < 0.5; th += 0.01) {
            auto t = partner_shares(in, scope, th);
            double sum = 0.0, level = 0.0;
            for (const auto& r : t.rows) {
                sum += r.share;
                level += r.level;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-9);
            CHECK(level == doctest::Approx(t.extra_total));
            CHECK(t.rows.size() - 1 <= prev_named);
            CHECK(t.other_share >= prev_other - 1e-15);
            prev_named = t.rows.size() - 1;
            prev_other = t.other_share;
        }
    }
    CHECK_THROWS_AS(partner_shares(in, SupplierScope::AllSectors, 0.0), ForgeError);
    CHECK_THROWS_AS(partner_shares(in, SupplierScope::AllSectors, 1.0), ForgeError);
}

TEST_CASE("sector shares and scopes") {
    RegionSectorInputs in;
    in.region = eu();
    in.sector = "C29";
    in.purchases = {{{"CHN", "C29"}, 10}, {{"CHN", "C26"}, 30}, {{"USA", "C24"}, 60}, {{"DEU", "C26"}, 999}};
    auto s = sector_input_shares(in, 0.2);
    CHECK(s.share_of("C24") == doctest::Approx(0.6));
    CHECK(s.share_of("C26") == doctest::Approx(0.3));
    CHECK(s.share_of("C29") == 0.0);
    CHECK(s.other_share == doctest::Approx(0.1));
    auto other = partner_shares(in, SupplierScope::OtherSectors, 0.01);
    CHECK(other.share_of("CHN") == doctest::Approx(30.0 / 90.0));
}

TEST_CASE("parsing long-format tables") {
    std::istringstream with_year(
        "year,origin_country,origin_sector,dest_country,dest_sector,value_usd\n"
        "2019,CHN,C29,DEU,C29,5\n2020,CHN,C29,DEU,C29,7\n2020,USA,C26,FRA,C29,3\n2020,USA,C26,ITA,C29,100\n");
    auto tables = parse_io_tables(with_year);
    CHECK(tables.size() == 2);
    auto in = aggregate_region_sector(tables.at(2020), eu(), "C29");
    CHECK(in.total() == 10);
    auto levels = import_level_series(tables, eu(), "C29", SupplierScope::AllSectors);
    CHECK(levels.at(2019) == 5);
    CHECK(levels.at(2020) == 10);

    std::istringstream no_year("origin_country,origin_sector,dest_country,dest_sector,value_usd\nCHN,C29,DEU,C29,5\n");
    CHECK(parse_io_tables(no_year, 2016).count(2016) == 1);

    std::istringstream bad_sector("origin_country,origin_sector,dest_country,dest_sector,value_usd\nCHN,ZZZ,DEU,C29,5\n");
    CHECK_THROWS_AS(parse_io_tables(bad_sector, 2016), ForgeError);
    std::istringstream negative("origin_country,origin_sector,dest_country,dest_sector,value_usd\nCHN,C29,DEU,C29,-5\n");
    CHECK_THROWS_AS(parse_io_tables(negative, 2016), ForgeError);
    CHECK(icio_sectors().size() == 45);
}

}
