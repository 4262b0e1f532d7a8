#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/catalog.hpp"
#include "forge/region.hpp"
#include "forge/trade.hpp"

namespace forge {

struct YearRange {
    int first = 0;
    int last = 0;
    bool contains(int y) const noexcept { return y >= first && y <= last; }
};

struct CategorySeriesKey {
    Category category;
    int year;
    std::string partner;
    friend auto operator<=>(const CategorySeriesKey&, const CategorySeriesKey&) = default;
};

using CategorySeries = std::map<CategorySeriesKey, double>;

/// Region-level extra-region trade per catalogue category, year and partner.
/// For imports the partner is the non-member exporter; for exports it is
/// the non-member importer. Flows between members are excluded.
CategorySeries category_series(const TradeTensor& tensor, const SupplyChainCatalog& catalog,
                               const RegionDefinition& region, FlowDirection direction, YearRange years);

/// Same aggregation keyed by individual product instead of category.
std::map<std::tuple<std::string, int, std::string>, double>
product_series(const TradeTensor& tensor, const std::set<std::string>& products, const RegionDefinition& region,
               FlowDirection direction, YearRange years);

struct ProductGrowth {
    std::string product;
    double start_value = 0.0;
    double end_value = 0.0;
    double growth = 0.0;  // (end - start) / start
};

struct GrowthReport {
    int start_year = 0;
    int end_year = 0;
    // Catalogue inputs with positive start value, growth descending, ties by code.
    std::vector<ProductGrowth> ranked;
    // Catalogue inputs imported at the end but not at the start.
    std::vector<ProductGrowth> new_products;
    // Mean growth over every product (catalogue or not) the region imports
    // from outside in the start year.
    double average_growth = 0.0;
    // Growth of the summed extra-region import bill over the same products.
    double aggregate_growth = 0.0;
};

/// Extra-region imports by product for one year, summed over members.
std::map<std::string, double> extra_region_imports(const TradeTensor& tensor, const RegionDefinition& region, int year);

GrowthReport import_growth_ranking(const TradeTensor& tensor, const SupplyChainCatalog& catalog,
                                   const RegionDefinition& region, int start_year, int end_year);

} // namespace forge
