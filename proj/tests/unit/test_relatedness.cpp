#include "doctest.h"

#include <cmath>
#include <random>

#include "forge/relatedness.hpp"
#include "support/fixtures.hpp"

using namespace forge;

TEST_SUITE("relatedness") {

TEST_CASE("hand example") {
    // p1 and p2 co-occur in c1 only; u1 = 2, u2 = 1 -> 1/2.
    auto m = fixtures::to_spec({{1, 1, 0}, {1, 0, 0}, {0, 0, 0}});
    const SpecializationMatrix hist[] = {m};
    auto rel = cooccurrence_relatedness(hist).values;
    CHECK(rel(0, 1) == doctest::Approx(0.5));
    CHECK(rel(1, 0) == doctest::Approx(0.5));
    CHECK(rel(0, 0) == 1.0);
    CHECK(rel(2, 2) == 1.0);
    CHECK(rel(0, 2) == 0.0);

    auto d = density(m, {rel, RelatednessMethod::Cooccurrence});
    // c2 for p2: (1 * 0.5 + 0 * 1 + 0 * 0) / (0.5 + 1 + 0)
    CHECK(d(1, 1) == doctest::Approx(0.5 / 1.5));
}

TEST_CASE("pooling over years") {
    auto a = fixtures::to_spec({{1, 1}, {1, 0}}, 2019);
    auto b = fixtures::to_spec({{1, 0}, {1, 1}}, 2020);
    const SpecializationMatrix hist[] = {a, b};
    auto rel = cooccurrence_relatedness(hist).values;
    // co-occurrences 2, u1 = 4, u2 = 2
    CHECK(rel(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("symmetry and bounds on random matrices") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        auto m = fixtures::to_spec(fixtures::random_binary(rng, 9, 7, 0.4));
        const SpecializationMatrix hist[] = {m};
        auto rel = cooccurrence_relatedness(hist);
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = 0; j < 7; ++j) {
                CHECK(rel.values(i, j) == rel.values(j, i));
                CHECK(rel.values(i, j) >= 0.0);
                CHECK(rel.values(i, j) <= 1.0);
            }
        auto d = density(m, rel);
        for (double v : d.data()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("partial overlap and density extremes") {
    // p1 held by c1..c3, p2 by c1, c2: overlap 2 over max ubiquity 3.
    auto m = fixtures::to_spec({{1, 1, 1}, {1, 1, 0}, {1, 0, 0}, {0, 0, 1}});
    const SpecializationMatrix hist[] = {m};
    const RelatednessMatrix rel = cooccurrence_relatedness(hist);
    CHECK(std::abs(rel.values(0, 1) - 2.0 / 3.0) <= 1e-12);

    auto d = density(m, rel);
    for (std::size_t p = 0; p < 3; ++p) CHECK(std::abs(d(0, p) - 1.0) <= 1e-12);  // c1 holds everything
}

TEST_CASE("density does not drop when a country gains a product") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        auto rows = fixtures::random_binary(rng, 8, 6, 0.35);
        auto m = fixtures::to_spec(rows);
        const SpecializationMatrix hist[] = {m};
        const auto rel = cooccurrence_relatedness(hist);
        const auto before = density(m, rel);
        for (std::size_t c = 0; c < rows.size(); ++c)
            for (std::size_t q = 0; q < rows[c].size(); ++q) {
                if (rows[c][q]) continue;
                auto grown = rows;
                grown[c][q] = 1;
                const auto after = density(fixtures::to_spec(grown), rel);
                for (std::size_t p = 0; p < rows[c].size(); ++p) CHECK(after(c, p) >= before(c, p));
            }
    }
}

TEST_CASE("mismatched product columns are rejected") {
    auto a = fixtures::to_spec({{1, 1}});
    auto b = make_specialization({"c1"}, {"p1", "q2"}, {{1, 0}});
    const SpecializationMatrix hist[] = {a, b};
    CHECK_THROWS_AS(cooccurrence_relatedness(hist), ForgeError);
}

}
