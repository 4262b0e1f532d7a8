#pragma once
#include <random>
#include <string>
#include <vector>

#include "forge/specialization.hpp"

namespace fixtures {

inline std::vector<std::string> labels(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

// Random 0/1 matrix with every row and column nonzero.
inline std::vector<std::vector<int>> random_binary(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                                   double density = 0.4) {
    std::bernoulli_distribution b(density);
    std::vector<std::vector<int>> m(rows, std::vector<int>(cols, 0));
    for (auto& r : m)
        for (auto& v : r) v = b(rng) ? 1 : 0;
    for (std::size_t c = 0; c < rows; ++c) m[c][rng() % cols] = 1;
    for (std::size_t p = 0; p < cols; ++p) m[rng() % rows][p] = 1;
    return m;
}

// Nested (upper-left triangular) n x n matrix: country i exports products 0..n-1-i.
inline std::vector<std::vector<int>> triangular(std::size_t n) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t p = 0; p + c < n; ++p) m[c][p] = 1;
    return m;
}

inline forge::SpecializationMatrix to_spec(const std::vector<std::vector<int>>& rows, int year = 2020) {
    return forge::make_specialization(labels("c", rows.size()), labels("p", rows.front().size()), rows, year);
}

} // namespace fixtures
