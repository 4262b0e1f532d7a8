#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace forge {

struct TreeParams {
    int n_trees = 100;
    int max_depth = 6;
    int min_samples_leaf = 1;
    int max_features = 0;  // features tried per split; 0 means ceil(sqrt(n_features))
    bool bootstrap = true;
};

/// Row-major feature table.
struct FeatureTable {
    std::size_t n_features = 0;
    std::vector<double> values;

    std::size_t n_rows() const { return n_features ? values.size() / n_features : 0; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * n_features, n_features}; }
};

struct TreeNode {
    int feature = -1;        // -1 for leaves
    double threshold = 0.0;  // x[feature] <= threshold goes left
    int left = -1;
    int right = -1;
    double value = 0.0;      // leaf score: fraction of positive samples

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Deterministic unbiased draw in [0, n).
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

/// Binary CART classification tree grown on Gini impurity.
class DecisionTree {
public:
    DecisionTree() = default;
    explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    static DecisionTree fit(const FeatureTable& x, std::span<const std::uint8_t> y,
                            std::vector<std::size_t> samples, const TreeParams& params, std::mt19937_64& rng);

    double predict(std::span<const double> features) const;
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    int depth() const;

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
    std::vector<TreeNode> nodes_;
};

/// Random-forest style bag of CART trees; score is the mean leaf score,
/// clipped to [0,1].
class TreeEnsemble {
public:
    TreeEnsemble() = default;
    explicit TreeEnsemble(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}

    static TreeEnsemble fit(const FeatureTable& x, std::span<const std::uint8_t> y, const TreeParams& params,
                            std::uint64_t seed);

    double predict(std::span<const double> features) const;
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

    void write(std::ostream& out) const;
    static TreeEnsemble read(std::istream& in);

    friend bool operator==(const TreeEnsemble&, const TreeEnsemble&) = default;

private:
    std::vector<DecisionTree> trees_;
};

} // namespace forge
