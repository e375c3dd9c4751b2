#include <algorithm>
#include <cmath>

#include "slampoint/common.hpp"
#include "slampoint/models.hpp"

namespace slampoint::models {

namespace {

// Entropy in bits of a two-class mass pair.
double entropy_pair(double w0, double w1) {
    const double total = w0 + w1;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double w : {w0, w1}) {
        const double p = w / total;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

double entropy(const std::vector<int>& labels) {
    if (labels.empty()) throw EmptyInput("entropy: no labels");
    double w1 = 0.0;
    for (int y : labels) w1 += y;
    return entropy_pair(static_cast<double>(labels.size()) - w1, w1);
}

double weighted_entropy(const std::vector<int>& labels, const std::vector<double>& weights,
                        const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw EmptyInput("weighted_entropy: no indices");
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t i : indices) {
        const double w = weights.empty() ? 1.0 : weights[i];
        (labels[i] == 1 ? w1 : w0) += w;
    }
    return entropy_pair(w0, w1);
}

// ---------------------------------------------------------------- tree type

double Tree::predict_one(const std::vector<double>& x) const {
    std::size_t n = 0;
    while (nodes[n].feature >= 0)
        n = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[n].feature)] <
                                             nodes[n].threshold
                                         ? nodes[n].left
                                         : nodes[n].right);
    return nodes[n].value;
}

int Tree::depth() const {
    if (nodes.empty()) return 0;
    int max_depth = 0;
    // iterative DFS carrying depth
    std::vector<std::pair<int, int>> stack = {{0, 0}};
    while (!stack.empty()) {
        auto [n, d] = stack.back();
        stack.pop_back();
        max_depth = std::max(max_depth, d);
        if (nodes[static_cast<std::size_t>(n)].feature >= 0) {
            stack.push_back({nodes[static_cast<std::size_t>(n)].left, d + 1});
            stack.push_back({nodes[static_cast<std::size_t>(n)].right, d + 1});
        }
    }
    return max_depth;
}

std::size_t Tree::n_leaves() const {
    std::size_t count = 0;
    for (const auto& n : nodes)
        if (n.feature < 0) ++count;
    return count;
}

// ---------------------------------------------------------------- fitting

namespace {

constexpr double kMinGain = 1e-12;

struct TreeBuilder {
    const Matrix& X;
    const std::vector<int>& y;
    const std::vector<double>& w;  // empty = uniform
    const TreeParams& params;
    std::size_t d;
    Rng rng;
    Tree tree;

    double weight(std::size_t i) const { return w.empty() ? 1.0 : w[i]; }

    int make_leaf(const std::vector<std::size_t>& idx) {
        double w0 = 0.0, w1 = 0.0;
        for (std::size_t i : idx) (y[i] == 1 ? w1 : w0) += weight(i);
        Tree::Node node;
        node.value = w1 > w0 ? 1.0 : 0.0;  // ties to class 0
        tree.nodes.push_back(node);
        return static_cast<int>(tree.nodes.size() - 1);
    }

    int build(std::vector<std::size_t>& idx, int depth) {
        double w0 = 0.0, w1 = 0.0;
        for (std::size_t i : idx) (y[i] == 1 ? w1 : w0) += weight(i);
        const bool pure = w0 <= 0.0 || w1 <= 0.0;
        const bool depth_capped = params.max_depth >= 0 && depth >= params.max_depth;
        if (idx.empty() || pure || depth_capped ||
            idx.size() < 2 * static_cast<std::size_t>(params.min_leaf))
            return make_leaf(idx);

        const double parent_entropy = entropy_pair(w0, w1);
        const double total_weight = w0 + w1;

        // per-node feature subset; the full set draws nothing
        std::vector<std::size_t> features;
        if (params.feature_subset <= 0 || static_cast<std::size_t>(params.feature_subset) >= d) {
            features.resize(d);
            for (std::size_t f = 0; f < d; ++f) features[f] = f;
        } else {
            features = rng.sample_indices(d, static_cast<std::size_t>(params.feature_subset));
        }

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gain = kMinGain;
        std::vector<std::size_t> sorted(idx);
        for (std::size_t f : features) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                if (X[a][f] != X[b][f]) return X[a][f] < X[b][f];
                return a < b;
            });
            double left_w0 = 0.0, left_w1 = 0.0;
            for (std::size_t k = 1; k < sorted.size(); ++k) {
                const std::size_t prev = sorted[k - 1];
                (y[prev] == 1 ? left_w1 : left_w0) += weight(prev);
                if (X[sorted[k]][f] <= X[prev][f]) continue;  // not a distinct boundary
                if (k < static_cast<std::size_t>(params.min_leaf) ||
                    sorted.size() - k < static_cast<std::size_t>(params.min_leaf))
                    continue;
                const double right_w0 = w0 - left_w0;
                const double right_w1 = w1 - left_w1;
                const double child_entropy = ((left_w0 + left_w1) * entropy_pair(left_w0, left_w1) +
                                              (right_w0 + right_w1) * entropy_pair(right_w0, right_w1)) /
                                             total_weight;
                const double gain = parent_entropy - child_entropy;
                if (gain > best_gain) {  // ties keep the earlier (feature, threshold)
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (X[prev][f] + X[sorted[k]][f]);
                }
            }
        }
        if (best_feature < 0) return make_leaf(idx);

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx)
            (X[i][static_cast<std::size_t>(best_feature)] < best_threshold ? left_idx : right_idx)
                .push_back(i);

        const int self = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(self)].feature = best_feature;
        tree.nodes[static_cast<std::size_t>(self)].threshold = best_threshold;
        tree.nodes[static_cast<std::size_t>(self)].gain = best_gain;
        const int left = build(left_idx, depth + 1);
        const int right = build(right_idx, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }
};

}  // namespace

Tree fit_tree(const Matrix& X, const std::vector<int>& y, const std::vector<double>& weights,
              const TreeParams& params) {
    if (X.size() != y.size()) throw DimensionMismatch("fit_tree: |X| != |y|");
    if (!weights.empty() && weights.size() != y.size())
        throw DimensionMismatch("fit_tree: |weights| != |y|");
    TreeBuilder builder{X, y, weights, params, X.empty() ? 0 : X[0].size(),
                        Rng::derive(params.seed, "tree-features"), {}};
    std::vector<std::size_t> idx(X.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    builder.build(idx, 0);
    return builder.tree;
}

}  // namespace slampoint::models
