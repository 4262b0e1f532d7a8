#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "forge/specialization.hpp"

namespace forge {

enum class Anchor { None, DummyCountry };
enum class MeanKind { Arithmetic, Geometric };

const char* to_string(Anchor a);

inline constexpr const char* kDummyCountry = "DUMMY";

struct EfcOptions {
    Anchor anchor = Anchor::DummyCountry;
    double tolerance = 1e-10;      // max relative L-inf change on both vectors
    int max_iterations = 1000;
    // Normaliser for the unanchored fitness update. Complexity always uses
    // the arithmetic mean.
    MeanKind fitness_mean = MeanKind::Arithmetic;
    bool record_trace = false;
    // Ranks unchanged for this many consecutive iterations sets rank_stable.
    int rank_window = 10;
    bool stop_on_rank_stability = false;
};

struct EfcIteration {
    int iteration = 0;
    std::vector<double> fitness;     // real countries, then the dummy when anchored
    std::vector<double> complexity;
    double fitness_change = 0.0;
    double complexity_change = 0.0;
};

/**
 * Fixed point of the Fitness-Complexity map.
 *
 * With anchor = DummyCountry an extra country exporting every product is
 * appended and the fitness vector is normalised by that country's fitness
 * each iteration, which pins it to exactly 1. The dummy is not part of
 * `countries`/`fitness`; its per-iteration value is kept in
 * `dummy_fitness_trace`.
 */
struct EfcResult {
    std::vector<std::string> countries;
    std::vector<std::string> products;
    std::vector<double> fitness;
    std::vector<double> complexity;
    int iterations = 0;
    bool converged = false;
    bool rank_stable = false;
    Anchor anchor = Anchor::DummyCountry;
    int year = 0;
    // Products whose complexity fell under 1e-300 and was floored to 0.
    std::vector<std::string> floored_products;
    std::vector<double> dummy_fitness_trace;
    std::vector<EfcIteration> trace;  // only with record_trace

    double fitness_of(const std::string& country) const;
    double complexity_of(const std::string& product) const;
};

EfcResult fitness_complexity(const SpecializationMatrix& m, const EfcOptions& options = {});

/// Sum of global complexities over the subset products a country is specialised in.
std::map<std::string, double> sector_fitness(const EfcResult& efc, const SpecializationMatrix& m,
                                             const std::set<std::string>& subset);

enum class Normalization { Raw, ByMax };

struct SectorFitnessEntry {
    std::string country;
    int year = 0;
    double raw = 0.0;
    double value = 0.0;  // raw, or raw / yearly max for ByMax
    int rank = 0;        // 1 = highest raw value that year; ties by country code
};

struct SectorFitnessSeries {
    std::vector<SectorFitnessEntry> entries;  // year ascending, then rank
    std::set<std::string> subset;
    Normalization normalization = Normalization::ByMax;

    double value(const std::string& country, int year) const;
};

struct YearlyEfc {
    EfcResult efc;
    SpecializationMatrix m;
};

/// Yearly sector fitness, optionally restricted to `countries` before the
/// per-year maximum is taken.
SectorFitnessSeries fitness_ranking_series(const std::vector<YearlyEfc>& years, const std::set<std::string>& subset,
                                           Normalization normalization = Normalization::ByMax,
                                           const std::set<std::string>& countries = {});

void write_fitness_csv(std::ostream& out, const EfcResult& r);
void write_complexity_csv(std::ostream& out, const EfcResult& r);
void write_efc_json(std::ostream& out, const EfcResult& r, bool include_trace);
void write_sector_fitness_csv(std::ostream& out, const SectorFitnessSeries& s);

} // namespace forge
