#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace forge {

// 64-bit FNV-1a. Used for content hashes in output metadata headers and the
// CLI's intermediate-artifact cache; not a cryptographic digest.
class ContentHash {
public:
    ContentHash& update(std::string_view bytes);
    ContentHash& update_file(const std::filesystem::path& path);
    std::uint64_t value() const noexcept { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// SplitMix64 finaliser; derives independent seeds from (seed, key).
std::uint64_t mix_seed(std::uint64_t seed, std::string_view key);

} // namespace forge
