#include "forge/tree_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "forge/csv.hpp"
#include "forge/errors.hpp"

namespace forge {

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = 0;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

namespace {

double gini(double pos, double n) {
    if (n <= 0.0) return 0.0;
    const double p = pos / n;
    return 2.0 * p * (1.0 - p);
}

struct Builder {
    const FeatureTable& x;
    std::span<const std::uint8_t> y;
    const TreeParams& params;
    std::mt19937_64& rng;
    std::size_t n_try;
    std::vector<TreeNode> nodes;
    std::vector<std::size_t> feature_pool;
    std::vector<std::pair<double, std::uint8_t>> scratch;

    int grow(std::vector<std::size_t>& samples, int depth) {
        double pos = 0.0;
        for (auto i : samples) pos += y[i];
        const double n = static_cast<double>(samples.size());

        const int id = static_cast<int>(nodes.size());
        nodes.push_back(TreeNode{-1, 0.0, -1, -1, n > 0.0 ? pos / n : 0.0});

        const auto min_leaf = static_cast<std::size_t>(std::max(1, params.min_samples_leaf));
        if (depth >= params.max_depth || pos == 0.0 || pos == n || samples.size() < 2 * min_leaf) return id;

        // Partial Fisher-Yates over the feature pool picks n_try candidates.
        std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
        const double parent = gini(pos, n);
        double best_gain = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        for (std::size_t k = 0; k < n_try; ++k) {
            const auto j = k + uniform_index(rng, feature_pool.size() - k);
            std::swap(feature_pool[k], feature_pool[j]);
            const auto f = feature_pool[k];

            scratch.clear();
            for (auto i : samples) scratch.emplace_back(x.row(i)[f], y[i]);
            std::sort(scratch.begin(), scratch.end());
            double left_pos = 0.0;
            for (std::size_t s = 0; s + 1 < scratch.size(); ++s) {
                left_pos += scratch[s].second;
                if (scratch[s].first == scratch[s + 1].first) continue;
                const std::size_t nl = s + 1, nr = scratch.size() - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double dl = static_cast<double>(nl), dr = static_cast<double>(nr);
                const double child = (dl * gini(left_pos, dl) + dr * gini(pos - left_pos, dr)) / n;
                const double gain = parent - child;
                if (gain > best_gain + 1e-15) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (scratch[s].first + scratch[s + 1].first);
                }
            }
        }
        if (best_feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (auto i : samples) (x.row(i)[static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right).push_back(i);
        samples.clear();
        samples.shrink_to_fit();

        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        nodes[static_cast<std::size_t>(id)].feature = best_feature;
        nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
        nodes[static_cast<std::size_t>(id)].left = l;
        nodes[static_cast<std::size_t>(id)].right = r;
        return id;
    }
};

} // namespace

DecisionTree DecisionTree::fit(const FeatureTable& x, std::span<const std::uint8_t> y, std::vector<std::size_t> samples,
                               const TreeParams& params, std::mt19937_64& rng) {
    if (x.n_rows() != y.size()) throw ForgeError(ErrorKind::InvalidArgument, "feature rows and labels differ in length");
    if (x.n_features == 0) throw ForgeError(ErrorKind::InvalidArgument, "tree needs at least one feature");
    std::size_t n_try = params.max_features > 0
                            ? static_cast<std::size_t>(params.max_features)
                            : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.n_features))));
    n_try = std::min(n_try, x.n_features);
    Builder b{x, y, params, rng, n_try, {}, std::vector<std::size_t>(x.n_features), {}};
    b.grow(samples, 0);
    return DecisionTree(std::move(b.nodes));
}

double DecisionTree::predict(std::span<const double> features) const {
    if (nodes_.empty()) return 0.0;
    std::size_t i = 0;
    while (!nodes_[i].is_leaf())
        i = static_cast<std::size_t>(features[static_cast<std::size_t>(nodes_[i].feature)] <= nodes_[i].threshold
                                         ? nodes_[i].left
                                         : nodes_[i].right);
    return nodes_[i].value;
}

int DecisionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<int> d(nodes_.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        if (!nodes_[i].is_leaf()) {
            d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        }
    }
    return deepest;
}

TreeEnsemble TreeEnsemble::fit(const FeatureTable& x, std::span<const std::uint8_t> y, const TreeParams& params,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = x.n_rows();
    std::vector<DecisionTree> trees;
    trees.reserve(static_cast<std::size_t>(std::max(params.n_trees, 0)));
    for (int t = 0; t < params.n_trees; ++t) {
        std::vector<std::size_t> samples(n);
        if (params.bootstrap)
            for (auto& s : samples) s = uniform_index(rng, n);
        else
            std::iota(samples.begin(), samples.end(), std::size_t{0});
        trees.push_back(DecisionTree::fit(x, y, std::move(samples), params, rng));
    }
    return TreeEnsemble(std::move(trees));
}

double TreeEnsemble::predict(std::span<const double> features) const {
    if (trees_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict(features);
    return std::clamp(sum / static_cast<double>(trees_.size()), 0.0, 1.0);
}

// Text format:
//   trees <count>
//   tree <node count>
//   L <value>                              leaf
//   S <feature> <threshold> <left> <right> <positive fraction>  split
void TreeEnsemble::write(std::ostream& out) const {
    out << "trees " << trees_.size() << '\n';
    for (const auto& t : trees_) {
        out << "tree " << t.nodes().size() << '\n';
        for (const auto& n : t.nodes()) {
            if (n.is_leaf())
                out << "L " << csv::format_double(n.value) << '\n';
            else
                out << "S " << n.feature << ' ' << csv::format_double(n.threshold) << ' ' << n.left << ' ' << n.right
                    << ' ' << csv::format_double(n.value) << '\n';
        }
    }
}

TreeEnsemble TreeEnsemble::read(std::istream& in) {
    auto bad = [](const std::string& what) { return ForgeError(ErrorKind::Parse, "tree ensemble: " + what); };
    std::string tag;
    std::size_t n_trees = 0;
    if (!(in >> tag >> n_trees) || tag != "trees") throw bad("expected 'trees <n>'");
    std::vector<DecisionTree> trees;
    for (std::size_t t = 0; t < n_trees; ++t) {
        std::size_t n_nodes = 0;
        if (!(in >> tag >> n_nodes) || tag != "tree") throw bad("expected 'tree <n>'");
        std::vector<TreeNode> nodes(n_nodes);
        for (auto& node : nodes) {
            std::string a, b, c;
            if (!(in >> tag)) throw bad("truncated tree");
            if (tag == "L") {
                in >> a;
                auto v = csv::parse_double(a);
                if (!v) throw bad("bad leaf value");
                node.value = *v;
            } else if (tag == "S") {
                in >> node.feature >> b >> node.left >> node.right >> c;
                auto thr = csv::parse_double(b);
                auto frac = csv::parse_double(c);
                if (!in || !thr || !frac) throw bad("bad split");
                node.threshold = *thr;
                node.value = *frac;
                if (node.left < 0 || node.right < 0 || static_cast<std::size_t>(node.left) >= n_nodes ||
                    static_cast<std::size_t>(node.right) >= n_nodes)
                    throw bad("child index out of range");
            } else {
                throw bad("unknown node tag '" + tag + "'");
            }
        }
        trees.emplace_back(std::move(nodes));
    }
    return TreeEnsemble(std::move(trees));
}

} // namespace forge
