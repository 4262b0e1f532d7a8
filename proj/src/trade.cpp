#include "forge/trade.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "forge/country_codes.hpp"
#include "forge/csv.hpp"

namespace forge {

const char* to_string(FlowDirection d) {
    return d == FlowDirection::Export ? "export" : "import";
}

std::optional<FlowDirection> parse_direction(std::string_view s) {
    if (s == "export") return FlowDirection::Export;
    if (s == "import") return FlowDirection::Import;
    return std::nullopt;
}

bool is_hs6_code(std::string_view code) {
    return code.size() == 6 &&
           std::all_of(code.begin(), code.end(), [](unsigned char ch) { return std::isdigit(ch); });
}

namespace {

const std::vector<std::string> kTradeHeader{"year", "reporter", "partner", "product", "direction", "value_usd"};

[[noreturn]] void fail(ErrorKind kind, std::size_t line, const std::string& what) {
    throw ForgeError(kind, "line " + std::to_string(line) + ": " + what, line);
}

bool known_country(const std::string& code, const ParseOptions& options) {
    return is_iso3_country(code) || options.extra_country_codes.count(code) > 0;
}

} // namespace

std::vector<TradeFlowRecord> parse_flows(std::istream& in, const ParseOptions& options) {
    std::vector<TradeFlowRecord> records;
    csv::LineReader reader(in);
    std::string line;
    if (!reader.next(line)) return records;

    if (csv::split_line(line) != kTradeHeader)
        fail(ErrorKind::Parse, reader.line_number(),
             "expected header year,reporter,partner,product,direction,value_usd");

    while (reader.next(line)) {
        const auto n = reader.line_number();
        auto f = csv::split_line(line);
        if (f.size() != kTradeHeader.size())
            fail(ErrorKind::Parse, n, "expected 6 fields, got " + std::to_string(f.size()));

        TradeFlowRecord rec;
        auto year = csv::parse_int(f[0]);
        if (!year) fail(ErrorKind::Parse, n, "bad year '" + f[0] + "'");
        rec.year = static_cast<int>(*year);

        std::vector<std::string> unknown;
        if (!known_country(f[1], options)) unknown.push_back(f[1]);
        if (!known_country(f[2], options)) unknown.push_back(f[2]);
        if (!is_hs6_code(f[3])) unknown.push_back(f[3]);
        if (!unknown.empty()) {
            std::string list;
            for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + ("'" + u + "'");
            fail(ErrorKind::UnknownCode, n, "unknown code(s): " + list);
        }
        rec.reporter = f[1];
        rec.partner = f[2];
        rec.product = f[3];
        if (rec.reporter == rec.partner) fail(ErrorKind::Parse, n, "reporter equals partner (" + f[1] + ")");

        auto dir = parse_direction(f[4]);
        if (!dir) fail(ErrorKind::Parse, n, "bad direction '" + f[4] + "'");
        rec.direction = *dir;

        auto value = csv::parse_double(f[5]);
        if (!value || !std::isfinite(*value)) fail(ErrorKind::Parse, n, "bad value '" + f[5] + "'");
        if (*value < 0.0) fail(ErrorKind::NegativeValue, n, "negative value " + f[5]);
        rec.value = *value;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TradeFlowRecord> parse_flows(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot open " + path.string());
    try {
        return parse_flows(in, options);
    } catch (const ForgeError& e) {
        throw ForgeError(e.kind(), path.string() + ": " + e.what(), e.line());
    }
}

void TradeTensor::add(const TradeKey& key, double value) {
    if (value < 0.0) throw ForgeError(ErrorKind::NegativeValue, "negative trade value");
    entries_[key] += value;
}

void TradeTensor::set(const TradeKey& key, double value) {
    if (value < 0.0) throw ForgeError(ErrorKind::NegativeValue, "negative trade value");
    entries_[key] = value;
}

double TradeTensor::value(const TradeKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : it->second;
}

std::set<int> TradeTensor::years() const {
    std::set<int> out;
    for (const auto& [k, v] : entries_) out.insert(k.year);
    return out;
}

std::set<std::string> TradeTensor::exporters() const {
    std::set<std::string> out;
    for (const auto& [k, v] : entries_) out.insert(k.exporter);
    return out;
}

std::set<std::string> TradeTensor::countries() const {
    std::set<std::string> out;
    for (const auto& [k, v] : entries_) {
        out.insert(k.exporter);
        out.insert(k.importer);
    }
    return out;
}

std::set<std::string> TradeTensor::products() const {
    std::set<std::string> out;
    for (const auto& [k, v] : entries_) out.insert(k.product);
    return out;
}

double TradeTensor::total() const {
    double sum = 0.0;
    for (const auto& [k, v] : entries_) sum += v;
    return sum;
}

ReconciliationStrategy ReconciliationStrategy::importer_priority() {
    return {"importer_priority", [](double, double imported) { return imported; }};
}

ReconciliationStrategy ReconciliationStrategy::exporter_priority() {
    return {"exporter_priority", [](double exported, double) { return exported; }};
}

ReconciliationStrategy ReconciliationStrategy::weighted_average(double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw ForgeError(ErrorKind::InvalidArgument, "weighted_average weight must lie in [0,1]");
    return {"weighted_average:" + csv::format_double(w),
            [w](double exported, double imported) { return w * exported + (1.0 - w) * imported; }};
}

ReconciliationStrategy ReconciliationStrategy::custom(std::string name, MergeFn fn) {
    return {std::move(name), std::move(fn)};
}

ReconciliationStrategy ReconciliationStrategy::parse(std::string_view spec) {
    spec = csv::trim(spec);
    if (spec == "importer_priority") return importer_priority();
    if (spec == "exporter_priority") return exporter_priority();
    constexpr std::string_view prefix = "weighted_average";
    if (spec.substr(0, prefix.size()) == prefix) {
        auto rest = spec.substr(prefix.size());
        if (rest.empty()) return weighted_average(0.5);
        if (rest.front() == ':' || rest.front() == '(') {
            rest.remove_prefix(1);
            if (!rest.empty() && rest.back() == ')') rest.remove_suffix(1);
            if (auto w = csv::parse_double(rest)) return weighted_average(*w);
        }
    }
    throw ForgeError(ErrorKind::InvalidArgument, "unknown reconciliation strategy '" + std::string(spec) + "'");
}

TradeTensor reconcile_mirror_flows(const std::vector<TradeFlowRecord>& records,
                                   const ReconciliationStrategy& strategy,
                                   int vintage) {
    struct Sides {
        std::optional<double> exported;
        std::optional<double> imported;
    };
    std::map<TradeKey, Sides> sides;
    for (const auto& r : records) {
        if (r.direction == FlowDirection::Export) {
            auto& s = sides[TradeKey{r.year, r.reporter, r.partner, r.product}];
            s.exported = s.exported.value_or(0.0) + r.value;
        } else {
            auto& s = sides[TradeKey{r.year, r.partner, r.reporter, r.product}];
            s.imported = s.imported.value_or(0.0) + r.value;
        }
    }

    TradeTensor tensor(vintage);
    for (const auto& [key, s] : sides) {
        double v = 0.0;
        if (s.exported && s.imported)
            v = strategy.merge(*s.exported, *s.imported);
        else
            v = s.exported ? *s.exported : *s.imported;
        tensor.set(key, v);
    }
    return tensor;
}

Matrix aggregate_exports(const TradeTensor& tensor, int year) {
    if (!tensor.years().count(year))
        throw ForgeError(ErrorKind::MissingYear, "year " + std::to_string(year) + " not present in trade tensor");
    const auto exporters = tensor.exporters();
    const auto products = tensor.products();
    Matrix w(std::vector<std::string>(exporters.begin(), exporters.end()),
             std::vector<std::string>(products.begin(), products.end()), 0.0);
    for (const auto& [k, v] : tensor.entries()) {
        if (k.year != year) continue;
        w(*w.row_index(k.exporter), *w.col_index(k.product)) += v;
    }
    return w;
}

void write_tensor(std::ostream& out, const TradeTensor& tensor) {
    out << "year,exporter,importer,product,value_usd\n";
    for (const auto& [k, v] : tensor.entries())
        out << k.year << ',' << k.exporter << ',' << k.importer << ',' << k.product << ','
            << csv::format_double(v) << '\n';
}

TradeTensor read_tensor(std::istream& in, int vintage) {
    TradeTensor tensor(vintage);
    csv::LineReader reader(in);
    std::string line;
    if (!reader.next(line)) return tensor;
    while (reader.next(line)) {
        auto f = csv::split_line(line);
        auto year = f.size() == 5 ? csv::parse_int(f[0]) : std::nullopt;
        auto value = f.size() == 5 ? csv::parse_double(f[4]) : std::nullopt;
        if (!year || !value)
            throw ForgeError(ErrorKind::Parse, "line " + std::to_string(reader.line_number()) + ": bad tensor row",
                             reader.line_number());
        tensor.set(TradeKey{static_cast<int>(*year), f[1], f[2], f[3]}, *value);
    }
    return tensor;
}

} // namespace forge
