#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/relatedness.hpp"
#include "forge/specialization.hpp"
#include "forge/tree_ensemble.hpp"

namespace forge {

struct ProgressionParams {
    TreeParams trees;
    // Negatives are subsampled to at most this multiple of the positives.
    double max_negative_ratio = 10.0;
    int horizon_years = 5;
    std::uint64_t seed = 42;
};

enum class ModelStatus { Fitted, DensityFallback };

struct ProductModel {
    std::string product;
    ModelStatus status = ModelStatus::DensityFallback;
    double prior = 0.0;  // positive rate of the full training set
    int positives = 0;
    int negatives = 0;
    TreeEnsemble ensemble;  // empty for DensityFallback
};

/// One model per product over the RCA vector of a country at the base year.
struct ProgressionModelSet {
    std::vector<std::string> feature_products;  // feature order == product universe
    std::vector<ProductModel> models;           // same order as feature_products
    ProgressionParams params;
    int train_year = 0;

    const ProductModel* find(const std::string& product) const;
};

/// Trains one ensemble per product on the countries not specialised in it
/// at t0; the label is specialisation at t1 (t0 + horizon). Features are
/// the t0 RCA rows carried by `m_t0`. Products without both classes fall
/// back to the density baseline.
ProgressionModelSet train_progression_models(const SpecializationMatrix& m_t0, const SpecializationMatrix& m_t1,
                                             const ProgressionParams& params = {});

/// Pair of snapshots one horizon apart.
struct TrainingWindow {
    const SpecializationMatrix* t0 = nullptr;
    const SpecializationMatrix* t1 = nullptr;
};

/// Pools the examples of several windows (e.g. 2010->2015, 2011->2016, ...)
/// into one training set per product. train_year is that of the first window.
ProgressionModelSet train_progression_models(std::span<const TrainingWindow> windows,
                                             const ProgressionParams& params = {});

/// Probabilities for every (country, product) pair with base-year RCA < 1.
struct ProgressionForecast {
    std::vector<std::string> countries;
    std::vector<std::string> products;
    std::vector<std::uint8_t> candidate;  // country-major
    std::vector<double> probability;      // NaN where not a candidate
    std::vector<std::uint8_t> fallback;   // per product
    int base_year = 0;
    int horizon_years = 5;

    std::optional<double> probability_of(const std::string& country, const std::string& product) const;
    bool is_candidate(std::size_t c, std::size_t p) const { return candidate[c * products.size() + p] != 0; }
    double at(std::size_t c, std::size_t p) const { return probability[c * products.size() + p]; }
};

ProgressionForecast predict_progression(const ProgressionModelSet& models, const SpecializationMatrix& m_base,
                                        const RcaMatrix& rca_base);

/// Density baseline on the same candidate mask.
ProgressionForecast density_forecast(const SpecializationMatrix& m_base, const RcaMatrix& rca_base,
                                     const RelatednessMatrix& rel, int horizon_years = 5);

struct CountryProgressionRow {
    std::string country;
    std::size_t candidates = 0;
    double mean = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    int rank = 0;
};

struct CountryProgressionStats {
    std::vector<CountryProgressionRow> rows;  // mean descending, ties by code
    double reference_mean = 0.0;              // over every candidate pair included
};

/// Per-country summary of candidate probabilities over `subset`. When
/// `countries` is non-empty only those countries are summarised and
/// contribute to the reference line.
CountryProgressionStats country_progression_stats(const ProgressionForecast& forecast,
                                                  const std::set<std::string>& subset,
                                                  const std::set<std::string>& countries = {});

// Linear-interpolation quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Area under the ROC curve via the Mann-Whitney rank statistic (ties get
/// half credit). Throws when either class is empty.
double roc_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

void write_forecast_csv(std::ostream& out, const ProgressionForecast& f);
ProgressionForecast read_forecast_csv(std::istream& in);
void write_progression_stats_csv(std::ostream& out, const CountryProgressionStats& s);

/// Model store: `<dir>/manifest.txt` plus one `<dir>/trees/<product>.txt`
/// per fitted product. `header` lines are written as leading '#' comments.
void save_models(const ProgressionModelSet& models, const std::filesystem::path& dir, std::string_view header = {});
ProgressionModelSet load_models(const std::filesystem::path& dir);

} // namespace forge
