#include "forge/relatedness.hpp"

#include <algorithm>

namespace forge {

RelatednessMatrix cooccurrence_relatedness(std::span<const SpecializationMatrix> history) {
    if (history.empty()) throw ForgeError(ErrorKind::InvalidArgument, "relatedness needs at least one matrix");
    const auto& products = history.front().products();
    const std::size_t np = products.size();

    std::vector<double> together(np * np, 0.0);
    std::vector<double> ubiq(np, 0.0);
    std::vector<std::size_t> active;
    for (const auto& s : history) {
        if (s.products() != products)
            throw ForgeError(ErrorKind::UniverseMismatch, "relatedness history mixes product universes");
        for (std::size_t c = 0; c < s.m.n_rows(); ++c) {
            active.clear();
            const auto row = s.m.row(c);
            for (std::size_t p = 0; p < np; ++p)
                if (row[p]) active.push_back(p);
            for (auto p : active) {
                ubiq[p] += 1.0;
                for (auto q : active) together[p * np + q] += 1.0;
            }
        }
    }

    Matrix values(products, products, 0.0);
    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t q = 0; q < np; ++q) {
            if (p == q) {
                values(p, q) = 1.0;
                continue;
            }
            const double denom = std::max(ubiq[p], ubiq[q]);
            if (ubiq[p] > 0.0 && ubiq[q] > 0.0) values(p, q) = together[p * np + q] / denom;
        }
    return {std::move(values), RelatednessMethod::Cooccurrence};
}

Matrix density(const SpecializationMatrix& s, const RelatednessMatrix& rel) {
    const auto& products = s.products();
    if (rel.values.row_labels() != products || rel.values.col_labels() != products)
        throw ForgeError(ErrorKind::UniverseMismatch, "relatedness and specialization products differ");
    const std::size_t np = products.size();
    std::vector<double> row_total(np, 0.0);
    for (std::size_t p = 0; p < np; ++p)
        for (double v : rel.values.row(p)) row_total[p] += v;

    Matrix out(s.countries(), products, 0.0);
    for (std::size_t c = 0; c < s.m.n_rows(); ++c) {
        const auto mrow = s.m.row(c);
        for (std::size_t p = 0; p < np; ++p) {
            if (row_total[p] == 0.0) continue;
            const auto rrow = rel.values.row(p);
            double num = 0.0;
            for (std::size_t q = 0; q < np; ++q)
                if (mrow[q]) num += rrow[q];
            out(c, p) = num / row_total[p];
        }
    }
    return out;
}

} // namespace forge
