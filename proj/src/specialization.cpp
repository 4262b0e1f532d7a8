#include "forge/specialization.hpp"

#include <cmath>

namespace forge {

RcaMatrix compute_rca(const Matrix& w, int year) {
    const std::size_t nc = w.n_rows(), np = w.n_cols();
    std::vector<double> row_sum(nc, 0.0), col_sum(np, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t p = 0; p < np; ++p) {
            const double v = w(c, p);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ForgeError(ErrorKind::InvalidArgument, "export matrix entries must be finite and non-negative");
            row_sum[c] += v;
            col_sum[p] += v;
            total += v;
        }
    if (total <= 0.0) throw ForgeError(ErrorKind::EmptyTrade, "export matrix sums to zero");

    Matrix rca(w.row_labels(), w.col_labels(), 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
        if (row_sum[c] == 0.0) continue;
        const double country_share = row_sum[c] / total;
        for (std::size_t p = 0; p < np; ++p) {
            if (col_sum[p] == 0.0 || w(c, p) == 0.0) continue;
            rca(c, p) = (w(c, p) / col_sum[p]) / country_share;
        }
    }
    return {std::move(rca), year};
}

SpecializationMatrix binarize(const RcaMatrix& rca, double threshold) {
    if (!(threshold > 0.0)) throw ForgeError(ErrorKind::InvalidArgument, "RCA threshold must be positive");
    const auto& v = rca.values;
    BinaryMatrix m(v.row_labels(), v.col_labels(), std::uint8_t{0});
    for (std::size_t i = 0; i < v.data().size(); ++i) m.data()[i] = v.data()[i] >= threshold ? 1 : 0;
    return {std::move(m), threshold, rca.year, rca.values};
}

SpecializationMatrix make_specialization(std::vector<std::string> countries, std::vector<std::string> products,
                                         const std::vector<std::vector<int>>& rows, int year) {
    if (rows.size() != countries.size())
        throw ForgeError(ErrorKind::InvalidArgument, "row count does not match country labels");
    BinaryMatrix m(std::move(countries), std::move(products), std::uint8_t{0});
    for (std::size_t c = 0; c < rows.size(); ++c) {
        if (rows[c].size() != m.n_cols())
            throw ForgeError(ErrorKind::InvalidArgument, "row length does not match product labels");
        for (std::size_t p = 0; p < rows[c].size(); ++p) m(c, p) = rows[c][p] != 0 ? 1 : 0;
    }
    return {std::move(m), 1.0, year, {}};
}

std::vector<int> diversification(const SpecializationMatrix& s) {
    std::vector<int> out(s.m.n_rows(), 0);
    for (std::size_t c = 0; c < s.m.n_rows(); ++c)
        for (auto v : s.m.row(c)) out[c] += v;
    return out;
}

std::vector<int> ubiquity(const SpecializationMatrix& s) {
    std::vector<int> out(s.m.n_cols(), 0);
    for (std::size_t c = 0; c < s.m.n_rows(); ++c)
        for (std::size_t p = 0; p < s.m.n_cols(); ++p) out[p] += s.m(c, p);
    return out;
}

} // namespace forge
