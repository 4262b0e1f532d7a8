#include "doctest.h"

#include <random>
#include <sstream>

#include "forge/csv.hpp"

using namespace forge;

TEST_SUITE("csv") {

TEST_CASE("split_line handles quotes and trimming") {
    CHECK(csv::split_line("a, b ,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(csv::split_line(R"(x,"y, z","q""uote")") == std::vector<std::string>{"x", "y, z", "q\"uote"});
    CHECK(csv::split_line("") == std::vector<std::string>{""});
}

TEST_CASE("quoted fields survive join/split") {
    std::vector<std::string> f{"plain", "with,comma", "with \"quote\"", ""};
    CHECK(csv::split_line(csv::join(f)) == f);
}

TEST_CASE("format_double round-trips exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        auto back = csv::parse_double(csv::format_double(v));
        REQUIRE(back);
        CHECK(*back == v);
    }
    CHECK(csv::format_double(0.0) == "0");
    CHECK(csv::format_double(1.5) == "1.5");
}

TEST_CASE("parse_double is strict") {
    CHECK_FALSE(csv::parse_double("1.0x"));
    CHECK_FALSE(csv::parse_double(""));
    CHECK(*csv::parse_double(" 2.5 ") == 2.5);
    CHECK(std::isinf(*csv::parse_double("inf")));
}

TEST_CASE("matrix csv round-trip") {
    Matrix m({"DEU", "FRA"}, {"p1", "p2"}, std::vector<double>{1.0 / 3.0, 0.0, 2.0, 1e-300});
    std::stringstream ss;
    csv::write_matrix(ss, m);
    CHECK(csv::read_matrix(ss) == m);
}

}
