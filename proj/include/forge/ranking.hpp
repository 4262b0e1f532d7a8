#pragma once

#include <string>
#include <vector>

namespace forge {

// Positions sorted by value descending, ties broken by label ascending.
std::vector<std::size_t> order_descending(const std::vector<std::string>& labels, const std::vector<double>& values);

// 1-based dense positions in the order above (no shared ranks).
std::vector<int> rank_descending(const std::vector<std::string>& labels, const std::vector<double>& values);

// Average ranks (ties share the mean position); input to Spearman.
std::vector<double> average_ranks(const std::vector<double>& values);

double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace forge
