#include <cmath>

#include "slampoint/common.hpp"
#include "slampoint/models.hpp"

namespace slampoint::models {

double ForestModel::predict_one(const std::vector<double>& x) const {
    if (trees.empty()) return 0.5;
    double votes = 0.0;
    for (const auto& t : trees) votes += t.predict_one(x);
    return votes / static_cast<double>(trees.size());
}

ForestModel fit_forest(const Matrix& X, const std::vector<int>& y, const ForestParams& params) {
    if (X.size() != y.size()) throw DimensionMismatch("fit_forest: |X| != |y|");
    const std::size_t n = X.size();
    const std::size_t d = n == 0 ? 0 : X[0].size();

    ForestModel model;
    model.params = params;
    int m_try = params.m_try;
    if (m_try == 0) m_try = std::max(1, static_cast<int>(std::floor(std::sqrt(d))));

    for (int t = 0; t < params.n_trees; ++t) {
        Rng boot_rng = Rng::derive(params.seed, "bootstrap-" + std::to_string(t));

        Matrix sample_x;
        std::vector<int> sample_y;
        if (params.bootstrap && n > 0) {
            sample_x.reserve(n);
            sample_y.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = static_cast<std::size_t>(boot_rng.below(n));
                sample_x.push_back(X[j]);
                sample_y.push_back(y[j]);
            }
        }

        TreeParams tp;
        tp.max_depth = params.max_depth;
        tp.min_leaf = params.min_leaf;
        tp.feature_subset = m_try;
        tp.seed = splitmix64(params.seed ^ fnv1a64("forest-tree-" + std::to_string(t)));
        model.trees.push_back(params.bootstrap ? fit_tree(sample_x, sample_y, {}, tp)
                                               : fit_tree(X, y, {}, tp));
    }
    return model;
}

}  // namespace slampoint::models
