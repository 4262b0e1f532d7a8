#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "forge/cli.hpp"
#include "forge/csv.hpp"
#include "forge/trade.hpp"

namespace forge::cli {

namespace {

[[noreturn]] void invalid(std::size_t line, const std::string& what) {
    throw ForgeError(ErrorKind::Validation, "config line " + std::to_string(line) + ": " + what, line);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        if (end == std::string_view::npos) end = s.size();
        auto item = csv::trim(s.substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

YearRange parse_range(std::string_view v, std::size_t line) {
    auto dash = v.find('-');
    auto a = csv::parse_int(v.substr(0, dash));
    auto b = dash == std::string_view::npos ? a : csv::parse_int(v.substr(dash + 1));
    if (!a || !b) invalid(line, "bad year range '" + std::string(v) + "'");
    if (*b < *a) invalid(line, "empty year range '" + std::string(v) + "'");
    return {static_cast<int>(*a), static_cast<int>(*b)};
}

} // namespace

std::string PipelineConfig::canonical() const {
    std::ostringstream o;
    auto list = [](const auto& items) {
        std::string s;
        for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
        return s;
    };
    o << "trade_vintage=" << trade_vintage << "\ntarget_vintage=" << target_vintage
      << "\nreconciliation=" << reconciliation << "\nextra_country_codes=" << list(extra_country_codes)
      << "\nyears=" << years.first << '-' << years.last << "\nrca_threshold=" << csv::format_double(rca_threshold)
      << "\nefc_anchor=" << to_string(efc_anchor) << "\nefc_tolerance=" << csv::format_double(efc_tolerance)
      << "\nefc_max_iterations=" << efc_max_iterations
      << "\nfitness_mean=" << (fitness_mean == MeanKind::Geometric ? "geometric" : "arithmetic")
      << "\nfitness_normalization=" << (fitness_normalization == Normalization::ByMax ? "by_max" : "raw")
      << "\nsector_countries=" << (sector_region_only ? "region" : "all") << "\ntrain_year=" << train_year
      << "\nbase_year=" << base_year << "\nhorizon=" << horizon << "\ntrees=" << trees << "\nmax_depth=" << max_depth
      << "\nmax_negative_ratio=" << csv::format_double(max_negative_ratio)
      << "\naccumulator_products=" << list(accumulator_products) << "\nio_sector=" << io_sector
      << "\nio_threshold=" << csv::format_double(io_threshold)
      << "\nio_threshold_base=" << (io_threshold_base == ThresholdBase::TotalInputs ? "total_inputs" : "extra_region")
      << "\nio_sector_threshold=" << csv::format_double(io_sector_threshold) << "\ntrend_years=" << trend_years.first
      << '-' << trend_years.last << "\ngrowth=" << growth_start << '-' << growth_end
      << "\nvulnerability_year=" << vulnerability_year
      << "\nexposure_cut=" << (exposure_cut ? csv::format_double(*exposure_cut) : "median")
      << "\nhhi_cut=" << (hhi_cut ? csv::format_double(*hhi_cut) : "median")
      << "\nprobability_floor=" << csv::format_double(probability_floor) << '\n';
    return o.str();
}

PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    PipelineConfig c;
    std::map<std::string, std::pair<std::string, std::size_t>> values;
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        auto hash = raw.find('#');
        auto line = csv::trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) invalid(n, "expected 'key = value'");
        std::string key(csv::trim(line.substr(0, eq)));
        std::string value(csv::trim(line.substr(eq + 1)));
        if (key.empty()) invalid(n, "missing key");
        if (!values.emplace(key, std::make_pair(value, n)).second) invalid(n, "duplicate key '" + key + "'");
    }

    auto resolve = [&](const std::string& v) {
        std::filesystem::path p(v);
        return (p.is_absolute() ? p : base_dir / p).lexically_normal();
    };
    auto as_int = [](const std::string& v, std::size_t line) {
        auto i = csv::parse_int(v);
        if (!i) invalid(line, "expected an integer, got '" + v + "'");
        return static_cast<int>(*i);
    };
    auto as_double = [](const std::string& v, std::size_t line) {
        auto d = csv::parse_double(v);
        if (!d || !std::isfinite(*d)) invalid(line, "expected a number, got '" + v + "'");
        return *d;
    };
    auto choice = [](const std::string& v, std::size_t line, std::initializer_list<const char*> options) {
        int i = 0;
        for (const char* o : options) {
            if (v == o) return i;
            ++i;
        }
        invalid(line, "unexpected value '" + v + "'");
    };

    std::optional<int> target;
    std::optional<YearRange> trend;
    using Setter = std::function<void(const std::string&, std::size_t)>;
    const std::map<std::string, Setter> setters{
        {"trade", [&](auto& v, auto) { c.trade = resolve(v); }},
        {"trade_vintage", [&](auto& v, auto l) { c.trade_vintage = as_int(v, l); }},
        {"target_vintage", [&](auto& v, auto l) { target = as_int(v, l); }},
        {"reconciliation",
         [&](auto& v, auto l) {
             try {
                 ReconciliationStrategy::parse(v);
             } catch (const ForgeError& e) {
                 invalid(l, e.what());
             }
             c.reconciliation = v;
         }},
        {"extra_country_codes",
         [&](auto& v, auto) {
             for (auto& code : split_list(v)) c.extra_country_codes.insert(code);
         }},
        {"catalog", [&](auto& v, auto) { c.catalog = resolve(v); }},
        {"concordance", [&](auto& v, auto) { c.concordance = resolve(v); }},
        {"region", [&](auto& v, auto) { c.region = resolve(v); }},
        {"io", [&](auto& v, auto) { c.io = resolve(v); }},
        {"years", [&](auto& v, auto l) { c.years = parse_range(v, l); }},
        {"rca_threshold", [&](auto& v, auto l) { c.rca_threshold = as_double(v, l); }},
        {"efc_anchor",
         [&](auto& v, auto l) {
             c.efc_anchor = choice(v, l, {"dummy_country", "none"}) == 0 ? Anchor::DummyCountry : Anchor::None;
         }},
        {"efc_tolerance", [&](auto& v, auto l) { c.efc_tolerance = as_double(v, l); }},
        {"efc_max_iterations", [&](auto& v, auto l) { c.efc_max_iterations = as_int(v, l); }},
        {"fitness_mean",
         [&](auto& v, auto l) {
             c.fitness_mean = choice(v, l, {"arithmetic", "geometric"}) == 0 ? MeanKind::Arithmetic : MeanKind::Geometric;
         }},
        {"fitness_normalization",
         [&](auto& v, auto l) {
             c.fitness_normalization = choice(v, l, {"by_max", "raw"}) == 0 ? Normalization::ByMax : Normalization::Raw;
         }},
        {"sector_countries", [&](auto& v, auto l) { c.sector_region_only = choice(v, l, {"region", "all"}) == 0; }},
        {"train_year", [&](auto& v, auto l) { c.train_year = as_int(v, l); }},
        {"base_year", [&](auto& v, auto l) { c.base_year = as_int(v, l); }},
        {"horizon", [&](auto& v, auto l) { c.horizon = as_int(v, l); }},
        {"trees", [&](auto& v, auto l) { c.trees = as_int(v, l); }},
        {"max_depth", [&](auto& v, auto l) { c.max_depth = as_int(v, l); }},
        {"max_negative_ratio", [&](auto& v, auto l) { c.max_negative_ratio = as_double(v, l); }},
        {"seed",
         [&](auto& v, auto l) {
             auto s = csv::parse_int(v);
             if (!s || *s < 0) invalid(l, "seed must be a non-negative integer");
             c.seed = static_cast<std::uint64_t>(*s);
         }},
        {"accumulator_products", [&](auto& v, auto) { c.accumulator_products = split_list(v); }},
        {"io_sector", [&](auto& v, auto) { c.io_sector = v; }},
        {"io_threshold", [&](auto& v, auto l) { c.io_threshold = as_double(v, l); }},
        {"io_threshold_base",
         [&](auto& v, auto l) {
             c.io_threshold_base = choice(v, l, {"total_inputs", "extra_region"}) == 0 ? ThresholdBase::TotalInputs
                                                                                       : ThresholdBase::ExtraRegion;
         }},
        {"io_sector_threshold", [&](auto& v, auto l) { c.io_sector_threshold = as_double(v, l); }},
        {"trend_years", [&](auto& v, auto l) { trend = parse_range(v, l); }},
        {"growth_start", [&](auto& v, auto l) { c.growth_start = as_int(v, l); }},
        {"growth_end", [&](auto& v, auto l) { c.growth_end = as_int(v, l); }},
        {"vulnerability_year", [&](auto& v, auto l) { c.vulnerability_year = as_int(v, l); }},
        {"exposure_cut", [&](auto& v, auto l) { c.exposure_cut = as_double(v, l); }},
        {"hhi_cut", [&](auto& v, auto l) { c.hhi_cut = as_double(v, l); }},
        {"probability_floor", [&](auto& v, auto l) { c.probability_floor = as_double(v, l); }},
        {"out", [&](auto& v, auto) { c.out = resolve(v); }},
    };
    for (const auto& [key, vl] : values) {
        auto it = setters.find(key);
        if (it == setters.end()) invalid(vl.second, "unknown key '" + key + "'");
        it->second(vl.first, vl.second);
    }

    for (const char* required : {"trade", "catalog", "concordance", "region", "years"})
        if (!values.count(required)) throw ForgeError(ErrorKind::Validation, std::string("config is missing '") + required + "'");

    c.target_vintage = target.value_or(c.trade_vintage);
    if (c.target_vintage < c.trade_vintage)
        throw ForgeError(ErrorKind::Validation, "target_vintage precedes trade_vintage");
    if (!c.train_year) c.train_year = c.years.first;
    if (!c.base_year) c.base_year = c.years.last;
    c.trend_years = trend.value_or(c.years);
    if (!c.growth_start) c.growth_start = c.years.first;
    if (!c.growth_end) c.growth_end = c.years.last;
    if (!c.vulnerability_year) c.vulnerability_year = c.base_year;
    if (c.out.empty()) c.out = resolve("forge-out");

    if (c.horizon < 1) throw ForgeError(ErrorKind::Validation, "horizon must be at least 1");
    if (c.trees < 1 || c.max_depth < 1) throw ForgeError(ErrorKind::Validation, "trees and max_depth must be positive");
    if (!(c.max_negative_ratio > 0.0)) throw ForgeError(ErrorKind::Validation, "max_negative_ratio must be positive");
    for (double t : {c.io_threshold, c.io_sector_threshold})
        if (!(t > 0.0 && t < 1.0)) throw ForgeError(ErrorKind::Validation, "IO thresholds must lie in (0,1)");
    if (!(c.efc_tolerance > 0.0) || c.efc_max_iterations < 1)
        throw ForgeError(ErrorKind::Validation, "EFC tolerance and iteration cap must be positive");
    if (!(c.probability_floor > 0.0 && c.probability_floor < 1.0))
        throw ForgeError(ErrorKind::Validation, "probability_floor must lie in (0,1)");
    if (!c.years.contains(c.train_year) || !c.years.contains(c.train_year + c.horizon))
        throw ForgeError(ErrorKind::Validation, "train_year and train_year + horizon must both lie in 'years'");
    if (!c.years.contains(c.base_year)) throw ForgeError(ErrorKind::Validation, "base_year must lie in 'years'");
    if (c.growth_end <= c.growth_start) throw ForgeError(ErrorKind::Validation, "growth_end must follow growth_start");
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot open config " + path.string());
    auto c = parse_config(in, path.parent_path());
    c.source = path;
    std::vector<std::filesystem::path> required{c.trade, c.catalog, c.concordance, c.region};
    if (c.io) required.push_back(*c.io);
    for (const auto& p : required)
        if (!std::filesystem::is_regular_file(p))
            throw ForgeError(ErrorKind::Validation, "config refers to a missing file: " + p.string());
    return c;
}

} // namespace forge::cli
