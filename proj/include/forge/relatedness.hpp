#pragma once

#include <span>
#include <vector>

#include "forge/specialization.hpp"

namespace forge {

enum class RelatednessMethod { Cooccurrence, Learned };

struct RelatednessMatrix {
    Matrix values;  // product x product, entries in [0,1]
    RelatednessMethod method = RelatednessMethod::Cooccurrence;
};

/// rel[p][q] = (# country-years specialised in both p and q) / max(u_p, u_q),
/// with u pooled over the same country-years. The diagonal is 1; pairs
/// involving a product nobody exports are 0. All matrices must share the
/// product columns.
RelatednessMatrix cooccurrence_relatedness(std::span<const SpecializationMatrix> history);

/// density_cp = sum_q M_cq rel_pq / sum_q rel_pq (0 when the denominator is 0).
Matrix density(const SpecializationMatrix& m, const RelatednessMatrix& rel);

} // namespace forge
