#include "forge/hash.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "forge/errors.hpp"

namespace forge {

ContentHash& ContentHash::update(std::string_view bytes) {
    for (unsigned char ch : bytes) {
        state_ ^= ch;
        state_ *= 0x100000001b3ULL;
    }
    return *this;
}

ContentHash& ContentHash::update_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot open " + path.string());
    std::array<char, 1 << 14> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
    }
    return *this;
}

std::string ContentHash::hex() const {
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(state_));
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view key) {
    std::uint64_t z = seed ^ ContentHash{}.update(key).value();
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace forge
