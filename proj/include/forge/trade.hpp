#pragma once

#include <compare>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/labeled_matrix.hpp"

namespace forge {

enum class FlowDirection { Export, Import };

const char* to_string(FlowDirection d);
std::optional<FlowDirection> parse_direction(std::string_view s);

/// One declared bilateral flow, as reported by `reporter`.
struct TradeFlowRecord {
    int year = 0;
    std::string reporter;
    std::string partner;
    std::string product;  // HS 6-digit, zero padded
    FlowDirection direction = FlowDirection::Export;
    double value = 0.0;   // USD

    friend bool operator==(const TradeFlowRecord&, const TradeFlowRecord&) = default;
};

struct ParseOptions {
    // Codes accepted in addition to ISO 3166-1 alpha-3 (reporting areas such
    // as "S19" or aggregates that some dumps carry).
    std::set<std::string> extra_country_codes;
};

bool is_hs6_code(std::string_view code);

/// Reads the trade CSV (`year,reporter,partner,product,direction,value_usd`).
/// Header is required. Throws ForgeError with the 1-based line on bad rows.
std::vector<TradeFlowRecord> parse_flows(std::istream& in, const ParseOptions& options = {});
std::vector<TradeFlowRecord> parse_flows(const std::filesystem::path& path, const ParseOptions& options = {});

struct TradeKey {
    int year = 0;
    std::string exporter;
    std::string importer;
    std::string product;

    friend auto operator<=>(const TradeKey&, const TradeKey&) = default;
    friend bool operator==(const TradeKey&, const TradeKey&) = default;
};

/// Sparse reconciled flows keyed by (year, exporter, importer, product).
class TradeTensor {
public:
    TradeTensor() = default;
    explicit TradeTensor(int vintage) : vintage_(vintage) {}

    int vintage() const noexcept { return vintage_; }
    void set_vintage(int v) noexcept { vintage_ = v; }

    // Adds to any existing value under the key. Negative values are rejected.
    void add(const TradeKey& key, double value);
    void set(const TradeKey& key, double value);
    double value(const TradeKey& key) const;

    const std::map<TradeKey, double>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::set<int> years() const;
    std::set<std::string> exporters() const;
    std::set<std::string> countries() const;  // exporters and importers
    std::set<std::string> products() const;
    double total() const;

    friend bool operator==(const TradeTensor&, const TradeTensor&) = default;

private:
    int vintage_ = 2007;
    std::map<TradeKey, double> entries_;
};

/**
 * Merge rule for a flow declared by both the exporter and the importer.
 *
 * weighted_average(w) returns w * exported + (1 - w) * imported, so w = 1
 * trusts the exporter completely. custom() accepts any rule so a full
 * Bayesian reconciliation can be dropped in without touching callers.
 */
class ReconciliationStrategy {
public:
    using MergeFn = std::function<double(double exported, double imported)>;

    static ReconciliationStrategy importer_priority();
    static ReconciliationStrategy exporter_priority();
    static ReconciliationStrategy weighted_average(double exporter_weight);
    static ReconciliationStrategy custom(std::string name, MergeFn fn);

    // Parses "importer_priority", "exporter_priority" or "weighted_average:<w>".
    static ReconciliationStrategy parse(std::string_view spec);

    double merge(double exported, double imported) const { return fn_(exported, imported); }
    const std::string& name() const noexcept { return name_; }

private:
    ReconciliationStrategy(std::string name, MergeFn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
    std::string name_;
    MergeFn fn_;
};

/// Builds the tensor from both declarations of each flow. Repeated rows with
/// the same reporter-side key are summed before merging.
TradeTensor reconcile_mirror_flows(const std::vector<TradeFlowRecord>& records,
                                   const ReconciliationStrategy& strategy,
                                   int vintage = 2007);

/// W[c][p] summed over importers for one year. Rows are every exporter that
/// appears anywhere in the tensor, columns every product, both sorted, so
/// matrices of different years share one universe.
Matrix aggregate_exports(const TradeTensor& tensor, int year);

void write_tensor(std::ostream& out, const TradeTensor& tensor);
TradeTensor read_tensor(std::istream& in, int vintage);

} // namespace forge
