#include "forge/region.hpp"

#include <fstream>
#include <istream>

#include "forge/csv.hpp"
#include "forge/errors.hpp"

namespace forge {

void RegionDefinition::validate() const {
    if (members.empty()) throw ForgeError(ErrorKind::EmptyRegion, "region '" + name + "' has no members");
}

RegionDefinition parse_region(std::istream& in) {
    RegionDefinition region;
    csv::LineReader reader(in);
    std::string line;
    while (reader.next(line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ForgeError(ErrorKind::Parse, "region line " + std::to_string(reader.line_number()) + ": expected key = value",
                             reader.line_number());
        const auto key = std::string(csv::trim(std::string_view(line).substr(0, eq)));
        const auto value = std::string_view(line).substr(eq + 1);
        if (key == "name") {
            region.name = std::string(csv::trim(value));
        } else if (key == "members") {
            for (auto& code : csv::split_line(value)) {
                if (code.empty()) continue;
                if (!region.members.insert(code).second)
                    throw ForgeError(ErrorKind::Validation, "duplicate region member " + code, reader.line_number());
            }
        } else {
            throw ForgeError(ErrorKind::Parse, "region: unknown key '" + key + "'", reader.line_number());
        }
    }
    region.validate();
    return region;
}

RegionDefinition load_region(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot open " + path.string());
    return parse_region(in);
}

} // namespace forge
