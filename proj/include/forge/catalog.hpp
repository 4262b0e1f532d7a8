#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forge/trade.hpp"

namespace forge {

enum class Category {
    RubberMetalParts,
    MiscellaneousParts,
    EnginesAndParts,
    ElectricalElectricParts,
    Vehicles,
    HybridVehicles,
    ElectricVehicles,
};

const char* to_string(Category c);
const char* display_name(Category c);
std::optional<Category> parse_category(std::string_view s);
const std::vector<Category>& all_categories();

// Intermediate inputs are everything that is not a finished vehicle.
bool is_input_category(Category c);

struct CatalogProduct {
    std::string code;
    int vintage = 2007;
    Category category = Category::MiscellaneousParts;
    std::string description;
};

struct ConcordanceTarget {
    std::string code;
    int vintage = 0;
    friend auto operator<=>(const ConcordanceTarget&, const ConcordanceTarget&) = default;
};

/**
 * Automotive supply-chain product list across HS vintages, plus the HS
 * concordance between vintages.
 *
 * Concordance entries map (code, from_vintage) to a set of codes in a later
 * vintage. Conversion across more than one revision chains through the
 * intermediate vintages in order.
 */
class SupplyChainCatalog {
public:
    SupplyChainCatalog() = default;
    SupplyChainCatalog(std::vector<CatalogProduct> products,
                       std::map<std::pair<std::string, int>, std::set<ConcordanceTarget>> concordance);

    // Reads the catalogue JSON document: {"products": [{code, vintage, category, description}, ...]}.
    static SupplyChainCatalog from_json(std::istream& in);
    static SupplyChainCatalog load(const std::filesystem::path& catalog_json,
                                   const std::filesystem::path& concordance_csv);

    // Adds concordance rows from CSV `code,from_vintage,to_code,to_vintage`.
    void load_concordance(std::istream& in);

    const std::vector<CatalogProduct>& products() const noexcept { return products_; }
    std::vector<CatalogProduct> products(int vintage) const;
    std::vector<CatalogProduct> inputs(int vintage) const;
    std::set<std::string> codes(int vintage) const;
    std::set<std::string> input_codes(int vintage) const;
    std::set<std::string> codes_in(int vintage, Category c) const;
    std::set<int> vintages() const;

    const CatalogProduct* find(const std::string& code, int vintage) const;

    // Direct (single-step) concordance targets; empty when the code is unmapped.
    const std::set<ConcordanceTarget>* concordance(const std::string& code, int from_vintage) const;
    const std::map<std::pair<std::string, int>, std::set<ConcordanceTarget>>& concordance() const noexcept {
        return concordance_;
    }

    // Throws ForgeError(Validation) listing every violated invariant:
    // duplicated (code, vintage), and catalogue codes of a non-final vintage
    // without a concordance entry towards the next vintage.
    void validate() const;

private:
    std::vector<CatalogProduct> products_;
    std::map<std::pair<std::string, int>, std::set<ConcordanceTarget>> concordance_;
};

/// Maps every flow through the concordance into `to_vintage`. One-to-many
/// splits divide the value equally across targets.
TradeTensor convert_vintage(const TradeTensor& tensor, const SupplyChainCatalog& catalog, int to_vintage);

} // namespace forge
