#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>

namespace forge {

/// Named country group, e.g. EU27. Members are ISO-3 codes.
struct RegionDefinition {
    std::string name;
    std::set<std::string> members;

    bool contains(const std::string& country) const { return members.count(country) > 0; }

    // Throws ForgeError(EmptyRegion) when there are no members.
    void validate() const;
};

/**
 * Region file format (key-value text, '#' comments):
 *
 *     name = EU27
 *     members = AUT, BEL, BGR, ...
 *
 * `members` may be repeated; duplicate codes are rejected.
 */
RegionDefinition parse_region(std::istream& in);
RegionDefinition load_region(const std::filesystem::path& path);

} // namespace forge
