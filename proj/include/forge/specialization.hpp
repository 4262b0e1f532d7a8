#pragma once

#include <vector>

#include "forge/labeled_matrix.hpp"

namespace forge {

/// Balassa RCA, country x product.
struct RcaMatrix {
    Matrix values;
    int year = 0;
};

/// Binary specialization matrix M together with the RCA it was cut from.
struct SpecializationMatrix {
    BinaryMatrix m;
    double threshold = 1.0;
    int year = 0;
    Matrix rca;  // provenance; same labels as m (may be empty for hand-built M)

    const std::vector<std::string>& countries() const noexcept { return m.row_labels(); }
    const std::vector<std::string>& products() const noexcept { return m.col_labels(); }
};

/// RCA_cp = (W_cp / sum_c W_cp) / (sum_p W_cp / sum_cp W_cp).
/// Entries whose row or column marginal is zero are 0.
/// Throws ForgeError(EmptyTrade) when W sums to zero, InvalidArgument on
/// negative or non-finite entries.
RcaMatrix compute_rca(const Matrix& w, int year = 0);

/// M_cp = 1 iff RCA_cp >= threshold (inclusive).
SpecializationMatrix binarize(const RcaMatrix& rca, double threshold = 1.0);

/// Builds M directly from 0/1 rows; used for fixtures and tests.
SpecializationMatrix make_specialization(std::vector<std::string> countries, std::vector<std::string> products,
                                         const std::vector<std::vector<int>>& rows, int year = 0);

std::vector<int> diversification(const SpecializationMatrix& m);
std::vector<int> ubiquity(const SpecializationMatrix& m);

} // namespace forge
