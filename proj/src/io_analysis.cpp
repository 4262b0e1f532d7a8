#include "forge/io_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "forge/csv.hpp"
#include "forge/errors.hpp"

namespace forge {

const std::vector<std::string>& icio_sectors() {
    static const std::vector<std::string> sectors{
        "A01_02", "A03",   "B05_06", "B07_08", "B09", "C10T12", "C13T15", "C16", "C17_18", "C19",   "C20", "C21",
        "C22",    "C23",   "C24",    "C25",    "C26", "C27",    "C28",    "C29", "C30",    "C31T33", "D",   "E",
        "F",      "G",     "H49",    "H50",    "H51", "H52",    "H53",    "I",   "J58T60", "J61",    "J62_63", "K",
        "L",      "M",     "N",      "O",      "P",   "Q",      "R",      "S",   "T"};
    return sectors;
}

std::map<int, IOTable> parse_io_tables(std::istream& in, int default_year, const std::vector<std::string>& sectors) {
    const std::set<std::string> declared(sectors.begin(), sectors.end());
    std::map<int, IOTable> tables;
    csv::LineReader reader(in);
    std::string line;
    if (!reader.next(line)) return tables;

    const auto header = csv::split_line(line);
    const std::vector<std::string> base{"origin_country", "origin_sector", "dest_country", "dest_sector", "value_usd"};
    bool with_year = false;
    if (header.size() == 6 && header[0] == "year" && std::equal(base.begin(), base.end(), header.begin() + 1))
        with_year = true;
    else if (header != base)
        throw ForgeError(ErrorKind::Parse,
                         "IO table: expected header [year,]origin_country,origin_sector,dest_country,dest_sector,value_usd",
                         reader.line_number());

    while (reader.next(line)) {
        const auto n = reader.line_number();
        auto f = csv::split_line(line);
        if (f.size() != header.size())
            throw ForgeError(ErrorKind::Parse, "IO table line " + std::to_string(n) + ": wrong field count", n);
        int year = default_year;
        if (with_year) {
            auto y = csv::parse_int(f[0]);
            if (!y) throw ForgeError(ErrorKind::Parse, "IO table line " + std::to_string(n) + ": bad year", n);
            year = static_cast<int>(*y);
            f.erase(f.begin());
        }
        for (int idx : {1, 3})
            if (!declared.count(f[static_cast<std::size_t>(idx)]))
                throw ForgeError(ErrorKind::UnknownSector,
                                 "IO table line " + std::to_string(n) + ": unknown sector '" + f[static_cast<std::size_t>(idx)] + "'", n);
        auto v = csv::parse_double(f[4]);
        if (!v || !std::isfinite(*v)) throw ForgeError(ErrorKind::Parse, "IO table line " + std::to_string(n) + ": bad value", n);
        if (*v < 0.0) throw ForgeError(ErrorKind::NegativeValue, "IO table line " + std::to_string(n) + ": negative value", n);
        auto& t = tables[year];
        t.year = year;
        t.sectors = declared;
        t.entries[IOKey{f[0], f[1], f[2], f[3]}] += *v;
    }
    return tables;
}

std::map<int, IOTable> parse_io_tables(const std::filesystem::path& path, int default_year,
                                       const std::vector<std::string>& sectors) {
    std::ifstream in(path);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot open " + path.string());
    return parse_io_tables(in, default_year, sectors);
}

double RegionSectorInputs::total() const {
    double s = 0.0;
    for (const auto& [k, v] : purchases) s += v;
    return s;
}

RegionSectorInputs aggregate_region_sector(const IOTable& io, const RegionDefinition& region, const std::string& sector) {
    region.validate();
    if (!io.sectors.empty() && !io.sectors.count(sector))
        throw ForgeError(ErrorKind::UnknownSector, "unknown sector '" + sector + "'");
    RegionSectorInputs out;
    out.year = io.year;
    out.region = region;
    out.sector = sector;
    for (const auto& [k, v] : io.entries)
        if (k.dest_sector == sector && region.contains(k.dest_country))
            out.purchases[OriginKey{k.origin_country, k.origin_sector}] += v;
    return out;
}

namespace {

bool in_scope(const std::string& origin_sector, const std::string& target, SupplierScope scope) {
    switch (scope) {
    case SupplierScope::SameSector: return origin_sector == target;
    case SupplierScope::OtherSectors: return origin_sector != target;
    case SupplierScope::AllSectors: return true;
    }
    return true;
}

template <class KeyFn>
SupplierShareTable build_shares(const RegionSectorInputs& inputs, SupplierScope scope, double threshold,
                                ThresholdBase base, KeyFn key_of) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ForgeError(ErrorKind::InvalidArgument, "share threshold must lie in (0,1)");
    std::map<std::string, double> levels;
    double all_in_scope = 0.0, extra = 0.0;
    for (const auto& [origin, v] : inputs.purchases) {
        if (!in_scope(origin.sector, inputs.sector, scope)) continue;
        all_in_scope += v;
        if (inputs.region.contains(origin.country)) continue;
        extra += v;
        levels[key_of(origin)] += v;
    }

    SupplierShareTable table;
    table.year = inputs.year;
    table.threshold = threshold;
    table.extra_total = extra;
    if (extra <= 0.0) {
        table.rows.push_back(ShareRow{"Other", 0.0, 0.0, true});
        return table;
    }
    const double denom = base == ThresholdBase::TotalInputs ? all_in_scope : extra;

    double other_level = 0.0;
    for (const auto& [k, level] : levels) {
        if (level / denom >= threshold)
            table.rows.push_back(ShareRow{k, level / extra, level, false});
        else
            other_level += level;
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const ShareRow& a, const ShareRow& b) {
        if (a.share != b.share) return a.share > b.share;
        return a.key < b.key;
    });
    table.other_share = other_level / extra;
    table.rows.push_back(ShareRow{"Other", table.other_share, other_level, true});
    return table;
}

} // namespace

double SupplierShareTable::share_of(const std::string& key) const {
    for (const auto& r : rows)
        if (!r.is_other && r.key == key) return r.share;
    return 0.0;
}

SupplierShareTable partner_shares(const RegionSectorInputs& inputs, SupplierScope scope, double threshold,
                                  ThresholdBase base) {
    return build_shares(inputs, scope, threshold, base, [](const OriginKey& o) { return o.country; });
}

SupplierShareTable sector_input_shares(const RegionSectorInputs& inputs, double threshold, ThresholdBase base) {
    return build_shares(inputs, SupplierScope::AllSectors, threshold, base, [](const OriginKey& o) { return o.sector; });
}

std::map<int, double> import_level_series(const std::map<int, IOTable>& tables, const RegionDefinition& region,
                                          const std::string& sector, SupplierScope scope) {
    std::map<int, double> out;
    for (const auto& [year, table] : tables) {
        const auto inputs = aggregate_region_sector(table, region, sector);
        double extra = 0.0;
        for (const auto& [origin, v] : inputs.purchases)
            if (in_scope(origin.sector, sector, scope) && !region.contains(origin.country)) extra += v;
        out[year] = extra;
    }
    return out;
}

void write_share_tables_csv(std::ostream& out, const std::vector<SupplierShareTable>& tables) {
    out << "year,key,share,level_usd,is_other\n";
    for (const auto& t : tables)
        for (const auto& r : t.rows)
            out << t.year << ',' << csv::quote_if_needed(r.key) << ',' << csv::format_double(r.share) << ','
                << csv::format_double(r.level) << ',' << (r.is_other ? 1 : 0) << '\n';
}

} // namespace forge
