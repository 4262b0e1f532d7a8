#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/efc.hpp"
#include "forge/io_analysis.hpp"
#include "forge/trade_series.hpp"

namespace forge::cli {

inline constexpr const char* kVersion = "0.1.0";

/**
 * Pipeline configuration, read from a key-value text file:
 *
 *     # comment
 *     trade = flows.csv
 *     years = 2015-2022
 *
 * Relative paths resolve against the directory holding the config file.
 * Unknown keys are rejected so typos do not silently fall back to defaults.
 */
struct PipelineConfig {
    std::filesystem::path source;  // the config file itself

    // inputs
    std::filesystem::path trade;
    int trade_vintage = 2012;
    int target_vintage = 2012;
    std::string reconciliation = "importer_priority";
    std::set<std::string> extra_country_codes;
    std::filesystem::path catalog;
    std::filesystem::path concordance;
    std::filesystem::path region;
    std::optional<std::filesystem::path> io;

    YearRange years;
    double rca_threshold = 1.0;

    Anchor efc_anchor = Anchor::DummyCountry;
    double efc_tolerance = 1e-10;
    int efc_max_iterations = 1000;
    MeanKind fitness_mean = MeanKind::Arithmetic;
    Normalization fitness_normalization = Normalization::ByMax;
    bool sector_region_only = true;

    int train_year = 0;  // first training window start; defaults to years.first
    int base_year = 0;   // defaults to years.last
    int horizon = 5;
    int trees = 100;
    int max_depth = 6;
    double max_negative_ratio = 10.0;
    std::uint64_t seed = 42;
    std::vector<std::string> accumulator_products{"850760"};

    std::string io_sector = "C29";
    double io_threshold = 0.05;
    ThresholdBase io_threshold_base = ThresholdBase::TotalInputs;
    double io_sector_threshold = 0.05;

    YearRange trend_years;  // defaults to years
    int growth_start = 0;   // defaults to years.first
    int growth_end = 0;     // defaults to years.last

    int vulnerability_year = 0;  // defaults to base_year
    std::optional<double> exposure_cut;
    std::optional<double> hhi_cut;
    double probability_floor = 1e-6;

    std::filesystem::path out;

    // Canonical "key=value" listing of every setting that affects results;
    // feeds the content hash.
    std::string canonical() const;
};

PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
// Parses and validates: referenced paths must exist and ranges be non-empty.
PipelineConfig load_config(const std::filesystem::path& path);

struct RunOptions {
    std::optional<int> year;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

// Each command reads its upstream artifacts from `out` and writes its own
// directory there. Returns a one-line summary.
std::string cmd_ingest(const PipelineConfig& config);
std::string cmd_rca(const PipelineConfig& config, std::optional<int> year);
std::string cmd_fitness(const PipelineConfig& config, std::optional<int> year);
std::string cmd_progression(const PipelineConfig& config, std::optional<int> base_year);
std::string cmd_io_shares(const PipelineConfig& config, std::optional<int> year);
std::string cmd_trends(const PipelineConfig& config, std::optional<int> end_year);
std::string cmd_vulnerability(const PipelineConfig& config, std::optional<int> year);

const std::vector<std::string>& command_names();

// Exit status: 0 success, 1 validation error, 2 computation error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

} // namespace forge::cli
