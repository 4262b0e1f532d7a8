#include "forge/trade_series.hpp"

#include <algorithm>
#include <tuple>

namespace forge {

namespace {

// Partner of an extra-region flow in the requested direction, or nullopt when
// the flow is not one.
std::optional<std::string> extra_region_partner(const TradeKey& k, const RegionDefinition& region,
                                                FlowDirection direction) {
    const bool exp_in = region.contains(k.exporter);
    const bool imp_in = region.contains(k.importer);
    if (direction == FlowDirection::Import && imp_in && !exp_in) return k.exporter;
    if (direction == FlowDirection::Export && exp_in && !imp_in) return k.importer;
    return std::nullopt;
}

} // namespace

CategorySeries category_series(const TradeTensor& tensor, const SupplyChainCatalog& catalog,
                               const RegionDefinition& region, FlowDirection direction, YearRange years) {
    region.validate();
    std::map<std::string, Category> category_of;
    for (const auto& p : catalog.products(tensor.vintage())) category_of.emplace(p.code, p.category);

    CategorySeries out;
    for (const auto& [k, v] : tensor.entries()) {
        if (!years.contains(k.year)) continue;
        auto cat = category_of.find(k.product);
        if (cat == category_of.end()) continue;
        if (auto partner = extra_region_partner(k, region, direction))
            out[CategorySeriesKey{cat->second, k.year, *partner}] += v;
    }
    return out;
}

std::map<std::tuple<std::string, int, std::string>, double>
product_series(const TradeTensor& tensor, const std::set<std::string>& products, const RegionDefinition& region,
               FlowDirection direction, YearRange years) {
    region.validate();
    std::map<std::tuple<std::string, int, std::string>, double> out;
    for (const auto& [k, v] : tensor.entries()) {
        if (!years.contains(k.year) || !products.count(k.product)) continue;
        if (auto partner = extra_region_partner(k, region, direction)) out[{k.product, k.year, *partner}] += v;
    }
    return out;
}

std::map<std::string, double> extra_region_imports(const TradeTensor& tensor, const RegionDefinition& region,
                                                   int year) {
    std::map<std::string, double> out;
    for (const auto& [k, v] : tensor.entries())
        if (k.year == year && region.contains(k.importer) && !region.contains(k.exporter)) out[k.product] += v;
    return out;
}

GrowthReport import_growth_ranking(const TradeTensor& tensor, const SupplyChainCatalog& catalog,
                                   const RegionDefinition& region, int start_year, int end_year) {
    region.validate();
    GrowthReport report;
    report.start_year = start_year;
    report.end_year = end_year;

    const auto v0 = extra_region_imports(tensor, region, start_year);
    const auto v1 = extra_region_imports(tensor, region, end_year);
    auto lookup = [](const std::map<std::string, double>& m, const std::string& code) {
        auto it = m.find(code);
        return it == m.end() ? 0.0 : it->second;
    };

    for (const auto& code : catalog.input_codes(tensor.vintage())) {
        ProductGrowth g{code, lookup(v0, code), lookup(v1, code), 0.0};
        if (g.start_value > 0.0) {
            g.growth = (g.end_value - g.start_value) / g.start_value;
            report.ranked.push_back(g);
        } else if (g.end_value > 0.0) {
            report.new_products.push_back(g);
        }
    }
    std::sort(report.ranked.begin(), report.ranked.end(), [](const ProductGrowth& a, const ProductGrowth& b) {
        if (a.growth != b.growth) return a.growth > b.growth;
        return a.product < b.product;
    });

    double sum_growth = 0.0, sum0 = 0.0, sum1 = 0.0;
    std::size_t n = 0;
    for (const auto& [code, start] : v0) {
        if (start <= 0.0) continue;
        const double end = lookup(v1, code);
        sum_growth += (end - start) / start;
        sum0 += start;
        sum1 += end;
        ++n;
    }
    if (n > 0) {
        report.average_growth = sum_growth / static_cast<double>(n);
        report.aggregate_growth = (sum1 - sum0) / sum0;
    }
    return report;
}

} // namespace forge
