#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/region.hpp"

namespace forge {

// The 45 industry codes of the 2023 ICIO release.
const std::vector<std::string>& icio_sectors();

struct IOKey {
    std::string origin_country;
    std::string origin_sector;
    std::string dest_country;
    std::string dest_sector;
    friend auto operator<=>(const IOKey&, const IOKey&) = default;
};

/// Intermediate-use block of an inter-country input-output table.
struct IOTable {
    int year = 0;
    std::map<IOKey, double> entries;
    std::set<std::string> sectors;  // declared code list
};

/**
 * Long-format CSV: `[year,]origin_country,origin_sector,dest_country,dest_sector,value_usd`.
 *
 * With a year column the file may hold several years; without one every row
 * belongs to `default_year`. Sector codes outside `sectors` are rejected.
 */
std::map<int, IOTable> parse_io_tables(std::istream& in, int default_year = 0,
                                       const std::vector<std::string>& sectors = icio_sectors());
std::map<int, IOTable> parse_io_tables(const std::filesystem::path& path, int default_year = 0,
                                       const std::vector<std::string>& sectors = icio_sectors());

struct OriginKey {
    std::string country;
    std::string sector;
    friend auto operator<=>(const OriginKey&, const OriginKey&) = default;
};

/// Input purchases of one region-sector block, keyed by origin.
struct RegionSectorInputs {
    int year = 0;
    RegionDefinition region;
    std::string sector;
    std::map<OriginKey, double> purchases;  // intra- and extra-region origins

    double total() const;
};

RegionSectorInputs aggregate_region_sector(const IOTable& io, const RegionDefinition& region, const std::string& sector);

enum class SupplierScope { SameSector, OtherSectors, AllSectors };

// Base against which the threshold is tested.
enum class ThresholdBase {
    TotalInputs,     // all inputs in scope, intra- and extra-region
    ExtraRegion,     // extra-region inputs in scope
};

struct ShareRow {
    std::string key;
    double share = 0.0;  // of extra-region inputs in scope
    double level = 0.0;  // USD
    bool is_other = false;
};

struct SupplierShareTable {
    int year = 0;
    double threshold = 0.05;
    std::vector<ShareRow> rows;  // named rows by share descending (ties by key), Other last
    double other_share = 0.0;
    double extra_total = 0.0;

    double share_of(const std::string& key) const;  // 0 when not named
};

/// Extra-region suppliers by partner country. Partners whose level divided
/// by the threshold base falls below `threshold` are pooled into Other.
SupplierShareTable partner_shares(const RegionSectorInputs& inputs, SupplierScope scope, double threshold,
                                  ThresholdBase base = ThresholdBase::TotalInputs);

/// Extra-region inputs grouped by origin sector.
SupplierShareTable sector_input_shares(const RegionSectorInputs& inputs, double threshold,
                                       ThresholdBase base = ThresholdBase::ExtraRegion);

/// Total extra-region input purchases per year.
std::map<int, double> import_level_series(const std::map<int, IOTable>& tables, const RegionDefinition& region,
                                          const std::string& sector, SupplierScope scope);

void write_share_tables_csv(std::ostream& out, const std::vector<SupplierShareTable>& tables);

} // namespace forge
