#include "forge/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forge/errors.hpp"

namespace forge {

std::vector<std::size_t> order_descending(const std::vector<std::string>& labels, const std::vector<double>& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return labels[a] < labels[b];
    });
    return idx;
}

std::vector<int> rank_descending(const std::vector<std::string>& labels, const std::vector<double>& values) {
    const auto order = order_descending(labels, values);
    std::vector<int> rank(values.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = static_cast<int>(pos) + 1;
    return rank;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw ForgeError(ErrorKind::InvalidArgument, "spearman needs two equal-length vectors of size >= 2");
    const auto ra = average_ranks(a), rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return saa == sbb ? 1.0 : 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace forge
