#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forge/catalog.hpp"
#include "forge/progression.hpp"
#include "forge/region.hpp"
#include "forge/trade.hpp"

namespace forge {

enum class ExposureStatus { Ok, FullyExternal, Untraded };

struct NetExposure {
    double value = 0.0;  // extra / intra; +inf when FullyExternal, 0 when Untraded
    ExposureStatus status = ExposureStatus::Ok;
    double extra = 0.0;
    double intra = 0.0;
};

/// Ratio of the region's imports from non-members to its imports from
/// members, for one product and year.
NetExposure net_exposure(const TradeTensor& tensor, const RegionDefinition& region, const std::string& product, int year);

/// Herfindahl-Hirschman index of extra-region supplier shares of one product.
/// Throws ForgeError(NoExternalSupply) when there are no extra-region imports.
double hhi_m(const TradeTensor& tensor, const RegionDefinition& region, const std::string& product, int year);

/// ln(1/p), with p floored at `floor`.
double size_metric(double probability, double floor = 1e-6);

/// Mean forecast probability over region members that are candidates for
/// the product; nullopt when no member is a candidate.
std::optional<double> region_progression_probability(const ProgressionForecast& forecast,
                                                     const RegionDefinition& region, const std::string& product);

struct VulnerabilityRecord {
    std::string product;
    std::string description;
    Category category = Category::MiscellaneousParts;
    int year = 0;
    double net_exposure = 0.0;
    ExposureStatus exposure_status = ExposureStatus::Ok;
    double hhi_m = 0.0;
    int suppliers = 0;  // extra-region suppliers with positive imports
    double progression_probability = 0.0;
    bool has_forecast = false;
    double size_metric = 0.0;
    std::string quadrant;  // "low/low", "high/high", "mixed" or "fully_external"
};

struct VulnerabilityOptions {
    double probability_floor = 1e-6;
    // Axis cut points for quadrant labels; medians of the table when unset.
    std::optional<double> exposure_cut;
    std::optional<double> hhi_cut;
};

struct VulnerabilityTable {
    std::vector<VulnerabilityRecord> records;  // catalogue order
    double exposure_cut = 0.0;
    double hhi_cut = 0.0;
};

/// One record per catalogue input (tensor vintage) with external supply.
/// Products with no extra-region imports are left out.
VulnerabilityTable build_vulnerability_table(const TradeTensor& tensor, const RegionDefinition& region,
                                             const SupplyChainCatalog& catalog, const ProgressionForecast& forecast,
                                             int year, const VulnerabilityOptions& options = {});

void write_vulnerability_csv(std::ostream& out, const VulnerabilityTable& table);

} // namespace forge
