#pragma once
// Straight dense-loop Fitness-Complexity fixed point, kept deliberately
// separate from the library: plain vectors, no sparse adjacency, no labels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct FcResult {
    std::vector<double> f;  // includes the dummy row last when anchored
    std::vector<double> q;
    int iterations = 0;
};

inline FcResult fitness_complexity(std::vector<std::vector<int>> m, bool dummy, double tol = 1e-10,
                                   int max_iter = 1000) {
    const std::size_t cols = m.front().size();
    if (dummy) m.push_back(std::vector<int>(cols, 1));
    const std::size_t rows = m.size();
    std::vector<double> f(rows, 1.0), q(cols, 1.0);
    FcResult out;
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<double> nf(rows, 0.0), nq(cols, 0.0);
        for (std::size_t c = 0; c < rows; ++c)
            for (std::size_t p = 0; p < cols; ++p)
                if (m[c][p]) nf[c] += q[p];
        double norm = 0.0;
        if (dummy) {
            norm = nf[rows - 1];
        } else {
            for (double v : nf) norm += v;
            norm /= static_cast<double>(rows);
        }
        for (auto& v : nf) {
            v /= norm;
            if (v < 1e-300) v = 0.0;
        }
        for (std::size_t p = 0; p < cols; ++p) {
            double s = 0.0;
            for (std::size_t c = 0; c < rows; ++c)
                if (m[c][p]) s += nf[c] > 0.0 ? 1.0 / nf[c] : std::numeric_limits<double>::infinity();
            nq[p] = (s > 0.0 && std::isfinite(s)) ? 1.0 / s : 0.0;
        }
        double qm = 0.0;
        for (double v : nq) qm += v;
        qm /= static_cast<double>(cols);
        for (auto& v : nq) {
            v /= qm;
            if (v < 1e-300) v = 0.0;
        }
        auto rel = [](const std::vector<double>& a, const std::vector<double>& b) {
            double worst = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] == 0.0) {
                    if (b[i] != 0.0) return std::numeric_limits<double>::infinity();
                    continue;
                }
                worst = std::max(worst, std::abs(b[i] - a[i]) / a[i]);
            }
            return worst;
        };
        const bool done = rel(f, nf) < tol && rel(q, nq) < tol;
        f = nf;
        q = nq;
        out.iterations = it;
        if (done) break;
    }
    out.f = f;
    out.q = q;
    return out;
}

} // namespace oracle
