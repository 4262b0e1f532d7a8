#include "forge/catalog.hpp"

#include <array>
#include <fstream>
#include <istream>

#include "forge/csv.hpp"
#include "json.hpp"

namespace forge {

namespace {

struct CategoryInfo {
    Category category;
    const char* id;
    const char* display;
};

constexpr std::array<CategoryInfo, 7> kCategories{{
    {Category::RubberMetalParts, "RubberMetalParts", "Rubber and Metal Parts"},
    {Category::MiscellaneousParts, "MiscellaneousParts", "Miscellaneous Parts"},
    {Category::EnginesAndParts, "EnginesAndParts", "Engines and Parts"},
    {Category::ElectricalElectricParts, "ElectricalElectricParts", "Electrical and Electric Parts"},
    {Category::Vehicles, "Vehicles", "Vehicles"},
    {Category::HybridVehicles, "HybridVehicles", "Hybrid Vehicles"},
    {Category::ElectricVehicles, "ElectricVehicles", "Electric Vehicles"},
}};

} // namespace

const char* to_string(Category c) {
    for (const auto& info : kCategories)
        if (info.category == c) return info.id;
    return "?";
}

const char* display_name(Category c) {
    for (const auto& info : kCategories)
        if (info.category == c) return info.display;
    return "?";
}

std::optional<Category> parse_category(std::string_view s) {
    for (const auto& info : kCategories)
        if (s == info.id || s == info.display) return info.category;
    return std::nullopt;
}

const std::vector<Category>& all_categories() {
    static const std::vector<Category> all = [] {
        std::vector<Category> v;
        for (const auto& info : kCategories) v.push_back(info.category);
        return v;
    }();
    return all;
}

bool is_input_category(Category c) {
    return c != Category::Vehicles && c != Category::HybridVehicles && c != Category::ElectricVehicles;
}

SupplyChainCatalog::SupplyChainCatalog(std::vector<CatalogProduct> products,
                                       std::map<std::pair<std::string, int>, std::set<ConcordanceTarget>> concordance)
    : products_(std::move(products)), concordance_(std::move(concordance)) {}

SupplyChainCatalog SupplyChainCatalog::from_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ForgeError(ErrorKind::Parse, std::string("catalogue JSON: ") + e.what());
    }
    std::vector<CatalogProduct> products;
    if (!doc.contains("products") || !doc["products"].is_array())
        throw ForgeError(ErrorKind::Parse, "catalogue JSON: missing \"products\" array");
    for (const auto& item : doc["products"]) {
        try {
            CatalogProduct p;
            p.code = item.at("code").get<std::string>();
            p.vintage = item.at("vintage").get<int>();
            auto cat = parse_category(item.at("category").get<std::string>());
            if (!cat) throw ForgeError(ErrorKind::UnknownCode, "unknown category " + item.at("category").dump());
            p.category = *cat;
            p.description = item.value("description", "");
            if (!is_hs6_code(p.code)) throw ForgeError(ErrorKind::UnknownCode, "bad HS code '" + p.code + "'");
            products.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            throw ForgeError(ErrorKind::Parse, std::string("catalogue JSON: ") + e.what());
        }
    }
    return SupplyChainCatalog(std::move(products), {});
}

SupplyChainCatalog SupplyChainCatalog::load(const std::filesystem::path& catalog_json,
                                            const std::filesystem::path& concordance_csv) {
    std::ifstream in(catalog_json);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot open " + catalog_json.string());
    auto catalog = from_json(in);
    std::ifstream conc(concordance_csv);
    if (!conc) throw ForgeError(ErrorKind::Io, "cannot open " + concordance_csv.string());
    catalog.load_concordance(conc);
    catalog.validate();
    return catalog;
}

void SupplyChainCatalog::load_concordance(std::istream& in) {
    csv::LineReader reader(in);
    std::string line;
    if (!reader.next(line)) return;
    const std::vector<std::string> header{"code", "from_vintage", "to_code", "to_vintage"};
    if (csv::split_line(line) != header)
        throw ForgeError(ErrorKind::Parse, "concordance: expected header code,from_vintage,to_code,to_vintage",
                         reader.line_number());
    while (reader.next(line)) {
        auto f = csv::split_line(line);
        const auto n = reader.line_number();
        auto from = f.size() == 4 ? csv::parse_int(f[1]) : std::nullopt;
        auto to = f.size() == 4 ? csv::parse_int(f[3]) : std::nullopt;
        if (!from || !to || !is_hs6_code(f[0]) || !is_hs6_code(f[2]))
            throw ForgeError(ErrorKind::Parse, "concordance line " + std::to_string(n) + ": malformed row", n);
        if (*to <= *from)
            throw ForgeError(ErrorKind::Parse,
                             "concordance line " + std::to_string(n) + ": target vintage must be later", n);
        concordance_[{f[0], static_cast<int>(*from)}].insert({f[2], static_cast<int>(*to)});
    }
}

std::vector<CatalogProduct> SupplyChainCatalog::products(int vintage) const {
    std::vector<CatalogProduct> out;
    for (const auto& p : products_)
        if (p.vintage == vintage) out.push_back(p);
    return out;
}

std::vector<CatalogProduct> SupplyChainCatalog::inputs(int vintage) const {
    std::vector<CatalogProduct> out;
    for (const auto& p : products_)
        if (p.vintage == vintage && is_input_category(p.category)) out.push_back(p);
    return out;
}

std::set<std::string> SupplyChainCatalog::codes(int vintage) const {
    std::set<std::string> out;
    for (const auto& p : products_)
        if (p.vintage == vintage) out.insert(p.code);
    return out;
}

std::set<std::string> SupplyChainCatalog::input_codes(int vintage) const {
    std::set<std::string> out;
    for (const auto& p : inputs(vintage)) out.insert(p.code);
    return out;
}

std::set<std::string> SupplyChainCatalog::codes_in(int vintage, Category c) const {
    std::set<std::string> out;
    for (const auto& p : products_)
        if (p.vintage == vintage && p.category == c) out.insert(p.code);
    return out;
}

std::set<int> SupplyChainCatalog::vintages() const {
    std::set<int> out;
    for (const auto& p : products_) out.insert(p.vintage);
    return out;
}

const CatalogProduct* SupplyChainCatalog::find(const std::string& code, int vintage) const {
    for (const auto& p : products_)
        if (p.code == code && p.vintage == vintage) return &p;
    return nullptr;
}

const std::set<ConcordanceTarget>* SupplyChainCatalog::concordance(const std::string& code, int from_vintage) const {
    auto it = concordance_.find({code, from_vintage});
    return it == concordance_.end() ? nullptr : &it->second;
}

void SupplyChainCatalog::validate() const {
    std::vector<std::string> problems;
    std::set<std::pair<std::string, int>> seen;
    for (const auto& p : products_)
        if (!seen.insert({p.code, p.vintage}).second)
            problems.push_back("duplicate catalogue entry " + p.code + " (HS" + std::to_string(p.vintage) + ")");

    const auto vs = vintages();
    for (auto it = vs.begin(); it != vs.end(); ++it) {
        auto next = std::next(it);
        if (next == vs.end()) break;
        for (const auto& p : products(*it)) {
            const auto* targets = concordance(p.code, *it);
            bool reaches_next = false;
            if (targets)
                for (const auto& t : *targets) reaches_next |= (t.vintage == *next);
            if (!reaches_next)
                problems.push_back("no concordance for " + p.code + " from HS" + std::to_string(*it) + " to HS" +
                                   std::to_string(*next));
        }
    }
    if (!problems.empty()) {
        std::string msg = "catalogue validation failed:";
        for (const auto& s : problems) msg += "\n  " + s;
        throw ForgeError(ErrorKind::Validation, msg);
    }
}

namespace {

// Single revision step; every code must have an entry towards `to`.
TradeTensor convert_step(const TradeTensor& tensor, const SupplyChainCatalog& catalog, int to) {
    std::set<std::string> missing;
    TradeTensor out(to);
    for (const auto& [key, value] : tensor.entries()) {
        const auto* targets = catalog.concordance(key.product, tensor.vintage());
        std::vector<std::string> codes;
        if (targets)
            for (const auto& t : *targets)
                if (t.vintage == to) codes.push_back(t.code);
        if (codes.empty()) {
            missing.insert(key.product);
            continue;
        }
        const double share = value / static_cast<double>(codes.size());
        for (const auto& code : codes) out.add(TradeKey{key.year, key.exporter, key.importer, code}, share);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& c : missing) list += (list.empty() ? "" : ", ") + c;
        throw ForgeError(ErrorKind::MissingConcordance, "no concordance from HS" + std::to_string(tensor.vintage()) +
                                                            " to HS" + std::to_string(to) + " for: " + list);
    }
    return out;
}

} // namespace

TradeTensor convert_vintage(const TradeTensor& tensor, const SupplyChainCatalog& catalog, int to_vintage) {
    if (to_vintage == tensor.vintage()) return tensor;
    if (to_vintage < tensor.vintage())
        throw ForgeError(ErrorKind::InvalidArgument, "backward HS conversion is not supported");

    // Step through the revisions the concordance knows about, in order.
    std::set<int> steps;
    for (const auto& [from, targets] : catalog.concordance())
        for (const auto& t : targets)
            if (t.vintage > tensor.vintage() && t.vintage <= to_vintage) steps.insert(t.vintage);
    if (!steps.count(to_vintage))
        throw ForgeError(ErrorKind::MissingConcordance, "no concordance reaches HS" + std::to_string(to_vintage));

    TradeTensor current = tensor;
    for (int step : steps) current = convert_step(current, catalog, step);
    return current;
}

} // namespace forge
