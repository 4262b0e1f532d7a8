#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "forge/progression.hpp"
#include "forge/ranking.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace forge;

namespace {

RcaMatrix rca_of(const SpecializationMatrix& m) { return {m.rca, m.year}; }

ProgressionParams small_params() {
    ProgressionParams p;
    p.trees.n_trees = 25;
    return p;
}

} // namespace

TEST_SUITE("progression") {

TEST_CASE("roc_auc with ties") {
    CHECK(roc_auc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}) == doctest::Approx(0.75));
    CHECK(roc_auc({0.5, 0.5}, {0, 1}) == doctest::Approx(0.5));
    CHECK(roc_auc({1, 2, 3}, {0, 1, 1}) == 1.0);
    CHECK_THROWS_AS(roc_auc({1, 2}, {1, 1}), ForgeError);
}

TEST_CASE("quantiles interpolate linearly") {
    std::vector<double> v{1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.0) == 1);
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted(v, 1.0) == 4);
}

TEST_CASE("candidate mask is exactly rca below one") {
    auto panel = synthetic::nested_growth(5, 20, 15, 2);
    const auto& m0 = panel.snapshots[0];
    auto models = train_progression_models(m0, panel.snapshots[1], small_params());
    auto f = predict_progression(models, panel.snapshots[1], rca_of(panel.snapshots[1]));
    const auto& rca = panel.snapshots[1].rca;
    for (std::size_t c = 0; c < f.countries.size(); ++c)
        for (std::size_t p = 0; p < f.products.size(); ++p) {
            const bool cand = rca(c, p) < 1.0;
            CHECK(f.is_candidate(c, p) == cand);
            CHECK(std::isnan(f.at(c, p)) == !cand);
            if (cand) {
                CHECK(f.at(c, p) >= 0.0);
                CHECK(f.at(c, p) <= 1.0);
            }
        }
}

TEST_CASE("products without both classes fall back to density") {
    // p1: every non-specialised country stays out -> no positives.
    Matrix r0({"a", "b", "c"}, {"p1", "p2"}, std::vector<double>{2, 0.5, 0.2, 0.9, 0.1, 0.3});
    Matrix r1({"a", "b", "c"}, {"p1", "p2"}, std::vector<double>{2, 1.5, 0.2, 0.9, 0.1, 0.3});
    auto m0 = binarize({r0, 2010});
    auto m1 = binarize({r1, 2015});
    auto models = train_progression_models(m0, m1, small_params());
    CHECK(models.find("p1")->status == ModelStatus::DensityFallback);
    CHECK(models.find("p1")->positives == 0);
    CHECK(models.find("p2")->status == ModelStatus::Fitted);
    auto f = predict_progression(models, m0, rca_of(m0));
    CHECK(f.fallback[0] == 1);
}

TEST_CASE("all-zero feature rows get the training prior") {
    auto panel = synthetic::nested_growth(9, 30, 12, 2);
    auto models = train_progression_models(panel.snapshots[0], panel.snapshots[1], small_params());
    Matrix zero_rca(panel.snapshots[1].rca.row_labels(), panel.snapshots[1].rca.col_labels(), 0.0);
    auto m_zero = binarize({zero_rca, 2010});
    auto f = predict_progression(models, m_zero, {zero_rca, 2010});
    for (std::size_t p = 0; p < f.products.size(); ++p)
        if (!f.fallback[p]) CHECK(f.at(0, p) == doctest::Approx(models.models[p].prior));
}

TEST_CASE("training is bit-exact under a fixed seed and models round-trip through disk") {
    auto panel = synthetic::nested_growth(17, 30, 12, 2);
    auto a = train_progression_models(panel.snapshots[0], panel.snapshots[1], small_params());
    auto b = train_progression_models(panel.snapshots[0], panel.snapshots[1], small_params());
    auto fa = predict_progression(a, panel.snapshots[1], rca_of(panel.snapshots[1]));
    auto fb = predict_progression(b, panel.snapshots[1], rca_of(panel.snapshots[1]));
    for (std::size_t i = 0; i < fa.probability.size(); ++i)
        if (fa.candidate[i]) CHECK(fa.probability[i] == fb.probability[i]);

    auto dir = std::filesystem::temp_directory_path() / "forge_models_roundtrip";
    std::filesystem::remove_all(dir);
    save_models(a, dir);
    auto loaded = load_models(dir);
    CHECK(loaded.feature_products == a.feature_products);
    auto fl = predict_progression(loaded, panel.snapshots[1], rca_of(panel.snapshots[1]));
    for (std::size_t i = 0; i < fa.probability.size(); ++i)
        if (fa.candidate[i]) CHECK(fl.probability[i] == fa.probability[i]);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_models(dir), ForgeError);
}

TEST_CASE("universe mismatch is rejected") {
    auto a = fixtures::to_spec({{1, 0}});
    auto b = make_specialization({"c1"}, {"p1", "p3"}, {{1, 0}});
    CHECK_THROWS_AS(train_progression_models(a, b), ForgeError);
}

TEST_CASE("forecast csv round-trip and country statistics") {
    ProgressionForecast f;
    f.countries = {"DEU", "FRA"};
    f.products = {"a", "b", "c"};
    f.candidate = {1, 1, 0, 1, 1, 1};
    f.probability = {0.2, 0.4, std::nan(""), 0.1, 0.3, 0.5};
    f.fallback = {0, 0, 0};
    f.base_year = 2021;
    std::stringstream ss;
    write_forecast_csv(ss, f);
    auto g = read_forecast_csv(ss);
    CHECK(g.countries == f.countries);
    CHECK(g.candidate == f.candidate);
    CHECK(g.base_year == 2021);
    CHECK(g.at(1, 2) == 0.5);

    auto stats = country_progression_stats(f, {"a", "b", "c"});
    REQUIRE(stats.rows.size() == 2);
    CHECK(stats.rows[0].country == "DEU");
    CHECK(stats.rows[0].mean == doctest::Approx(0.3));
    CHECK(stats.rows[1].median == doctest::Approx(0.3));
    CHECK(stats.reference_mean == doctest::Approx(1.5 / 5.0));
    auto only_fra = country_progression_stats(f, {"a", "b", "c"}, {"FRA"});
    CHECK(only_fra.reference_mean == doctest::Approx(0.3));
}

TEST_CASE("density baseline forecast") {
    auto m = fixtures::to_spec({{1, 1, 0}, {1, 0, 0}});
    Matrix rca(m.m.row_labels(), m.m.col_labels(), std::vector<double>{2, 2, 0, 2, 0.5, 0});
    const SpecializationMatrix hist[] = {m};
    auto f = density_forecast(m, {rca, 2020}, cooccurrence_relatedness(hist));
    CHECK(f.is_candidate(1, 1));
    CHECK_FALSE(f.is_candidate(0, 0));
    CHECK(f.at(1, 1) == doctest::Approx(1.0 / 3.0));  // 0.5 / (0.5 + 1 + 0)
}

TEST_CASE("forecasts rank with density on nested growth") {
    auto panel = synthetic::nested_growth(3, 40, 30, 2);
    const auto& s0 = panel.snapshots[0];
    const auto& s1 = panel.snapshots[1];
    auto f = predict_progression(train_progression_models(s0, s1, small_params()), s1, rca_of(s1));
    const SpecializationMatrix hist[] = {s0, s1};
    auto d = density_forecast(s1, rca_of(s1), cooccurrence_relatedness(hist));
    std::vector<double> a, b;
    for (std::size_t c = 0; c < f.countries.size(); ++c)
        for (std::size_t p = 0; p < f.products.size(); ++p)
            if (f.is_candidate(c, p)) {
                a.push_back(f.at(c, p));
                b.push_back(d.at(c, p));
            }
    REQUIRE(a.size() > 100);
    CHECK(spearman(a, b) > 0.0);
}

}
