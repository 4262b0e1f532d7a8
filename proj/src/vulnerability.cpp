#include "forge/vulnerability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "forge/csv.hpp"

namespace forge {

NetExposure net_exposure(const TradeTensor& tensor, const RegionDefinition& region, const std::string& product,
                         int year) {
    region.validate();
    NetExposure e;
    for (const auto& [k, v] : tensor.entries()) {
        if (k.year != year || k.product != product || !region.contains(k.importer)) continue;
        (region.contains(k.exporter) ? e.intra : e.extra) += v;
    }
    if (e.intra > 0.0) {
        e.value = e.extra / e.intra;
    } else if (e.extra > 0.0) {
        e.status = ExposureStatus::FullyExternal;
        e.value = std::numeric_limits<double>::infinity();
    } else {
        e.status = ExposureStatus::Untraded;
    }
    return e;
}

namespace {

std::map<std::string, double> extra_suppliers(const TradeTensor& tensor, const RegionDefinition& region,
                                              const std::string& product, int year) {
    std::map<std::string, double> by_supplier;
    for (const auto& [k, v] : tensor.entries())
        if (k.year == year && k.product == product && region.contains(k.importer) && !region.contains(k.exporter) &&
            v > 0.0)
            by_supplier[k.exporter] += v;
    return by_supplier;
}

double hhi_of(const std::map<std::string, double>& by_supplier) {
    double total = 0.0;
    for (const auto& [s, v] : by_supplier) total += v;
    double h = 0.0;
    for (const auto& [s, v] : by_supplier) {
        const double share = v / total;
        h += share * share;
    }
    return h;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

double hhi_m(const TradeTensor& tensor, const RegionDefinition& region, const std::string& product, int year) {
    region.validate();
    const auto by_supplier = extra_suppliers(tensor, region, product, year);
    if (by_supplier.empty())
        throw ForgeError(ErrorKind::NoExternalSupply,
                         "no extra-region imports of " + product + " in " + std::to_string(year));
    return hhi_of(by_supplier);
}

double size_metric(double probability, double floor) {
    return std::log(1.0 / std::max(probability, floor));
}

std::optional<double> region_progression_probability(const ProgressionForecast& forecast,
                                                     const RegionDefinition& region, const std::string& product) {
    auto p = std::find(forecast.products.begin(), forecast.products.end(), product);
    if (p == forecast.products.end()) return std::nullopt;
    const auto pi = static_cast<std::size_t>(p - forecast.products.begin());
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < forecast.countries.size(); ++c) {
        if (!region.contains(forecast.countries[c]) || !forecast.is_candidate(c, pi)) continue;
        sum += forecast.at(c, pi);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

VulnerabilityTable build_vulnerability_table(const TradeTensor& tensor, const RegionDefinition& region,
                                             const SupplyChainCatalog& catalog, const ProgressionForecast& forecast,
                                             int year, const VulnerabilityOptions& options) {
    region.validate();
    VulnerabilityTable table;
    for (const auto& product : catalog.inputs(tensor.vintage())) {
        const auto suppliers = extra_suppliers(tensor, region, product.code, year);
        if (suppliers.empty()) continue;
        VulnerabilityRecord r;
        r.product = product.code;
        r.description = product.description;
        r.category = product.category;
        r.year = year;
        const auto e = net_exposure(tensor, region, product.code, year);
        r.net_exposure = e.value;
        r.exposure_status = e.status;
        r.hhi_m = hhi_of(suppliers);
        r.suppliers = static_cast<int>(suppliers.size());
        if (auto p = region_progression_probability(forecast, region, product.code)) {
            r.progression_probability = *p;
            r.has_forecast = true;
        }
        r.size_metric = size_metric(r.progression_probability, options.probability_floor);
        table.records.push_back(std::move(r));
    }

    std::vector<double> exposures, hhis;
    for (const auto& r : table.records) {
        if (r.exposure_status != ExposureStatus::Ok) continue;
        exposures.push_back(r.net_exposure);
        hhis.push_back(r.hhi_m);
    }
    table.exposure_cut = options.exposure_cut.value_or(median(exposures));
    table.hhi_cut = options.hhi_cut.value_or(median(hhis));
    for (auto& r : table.records) {
        if (r.exposure_status == ExposureStatus::FullyExternal) {
            r.quadrant = "fully_external";
            continue;
        }
        const bool high_exposure = r.net_exposure >= table.exposure_cut;
        const bool high_hhi = r.hhi_m >= table.hhi_cut;
        r.quadrant = high_exposure && high_hhi ? "high/high" : (!high_exposure && !high_hhi ? "low/low" : "mixed");
    }
    return table;
}

void write_vulnerability_csv(std::ostream& out, const VulnerabilityTable& table) {
    out << "# exposure_cut: " << csv::format_double(table.exposure_cut) << '\n'
        << "# hhi_cut: " << csv::format_double(table.hhi_cut) << '\n';
    // Probability and size stay blank when every member already holds the
    // advantage, i.e. there is nothing to forecast.
    out << "product,description,category,net_exposure,hhi_m,progression_probability,size_metric,quadrant\n";
    for (const auto& r : table.records)
        out << r.product << ',' << csv::quote_if_needed(r.description) << ',' << to_string(r.category) << ','
            << csv::format_double(r.net_exposure) << ',' << csv::format_double(r.hhi_m) << ','
            << (r.has_forecast ? csv::format_double(r.progression_probability) : "") << ','
            << (r.has_forecast ? csv::format_double(r.size_metric) : "") << ',' << r.quadrant << '\n';
}

} // namespace forge
