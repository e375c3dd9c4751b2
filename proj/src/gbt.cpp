#include <algorithm>
#include <cmath>
#include <cstdint>

#include "slampoint/models.hpp"

namespace slampoint::models {

double GbtModel::margin_one(const std::vector<double>& x) const {
    double margin = base_score;
    for (const auto& t : trees) margin += params.eta * t.predict_one(x);
    return margin;
}

double GbtModel::predict_one(const std::vector<double>& x) const {
    return sigmoid(margin_one(x));
}

namespace {

constexpr double kMinGain = 1e-12;

double leaf_weight(double G, double H, double lambda) {
    const double denom = H + lambda;
    return denom > 0.0 ? -G / denom : 0.0;
}

double split_term(double G, double H, double lambda) {
    const double denom = H + lambda;
    return denom > 0.0 ? G * G / denom : 0.0;
}

}  // namespace

GbtModel fit_gbt(const Matrix& X, const std::vector<int>& y, const GbtParams& params) {
    if (X.size() != y.size()) throw DimensionMismatch("fit_gbt: |X| != |y|");
    const std::size_t n = X.size();
    const std::size_t d = n == 0 ? 0 : X[0].size();

    GbtModel model;
    model.params = params;
    model.feature_gain.assign(d, 0.0);

    double mean_y = 0.5;
    if (n > 0) {
        double pos = 0.0;
        for (int v : y) pos += v;
        mean_y = pos / static_cast<double>(n);
    }
    mean_y = std::min(1.0 - 1e-6, std::max(1e-6, mean_y));
    model.base_score = std::log(mean_y / (1.0 - mean_y));
    if (n == 0) return model;

    // columns presorted once; every round reuses them
    std::vector<std::vector<std::uint32_t>> order(d);
    for (std::size_t f = 0; f < d; ++f) {
        order[f].resize(n);
        for (std::size_t i = 0; i < n; ++i) order[f][i] = static_cast<std::uint32_t>(i);
        std::sort(order[f].begin(), order[f].end(), [&](std::uint32_t a, std::uint32_t b) {
            if (X[a][f] != X[b][f]) return X[a][f] < X[b][f];
            return a < b;
        });
    }

    std::vector<double> margins(n, model.base_score);
    std::vector<double> grad(n), hess(n);
    std::vector<std::int32_t> node_of(n);

    struct GrowNode {
        int tree_index;
        double G, H;
        int depth;
    };
    struct RunState {
        double GL = 0.0, HL = 0.0;
        double prev = 0.0;
        bool has_prev = false;
    };
    struct BestSplit {
        double gain = kMinGain;
        int feature = -1;
        double threshold = 0.0;
        double GL = 0.0, HL = 0.0;
    };

    for (int round = 0; round < params.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(margins[i]);
            double g = p - y[i];
            double h = p * (1.0 - p);
            if (y[i] == 1) {
                g *= params.scale_pos_weight;
                h *= params.scale_pos_weight;
            }
            grad[i] = g;
            hess[i] = h;
        }

        Tree tree;
        double root_G = 0.0, root_H = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            root_G += grad[i];
            root_H += hess[i];
        }
        tree.nodes.emplace_back();
        tree.nodes[0].value = leaf_weight(root_G, root_H, params.lambda);
        std::fill(node_of.begin(), node_of.end(), 0);

        // max_depth <= 0 means unlimited; the root split attempt always runs
        std::vector<GrowNode> frontier = {{0, root_G, root_H, 0}};
        std::vector<std::int32_t> slot_of;  // tree node index -> frontier slot

        while (!frontier.empty()) {
            slot_of.assign(tree.nodes.size(), -1);
            for (std::size_t s = 0; s < frontier.size(); ++s)
                slot_of[static_cast<std::size_t>(frontier[s].tree_index)] =
                    static_cast<std::int32_t>(s);

            std::vector<BestSplit> best(frontier.size());
            std::vector<RunState> run(frontier.size());
            for (std::size_t f = 0; f < d; ++f) {
                std::fill(run.begin(), run.end(), RunState{});
                for (std::uint32_t i : order[f]) {
                    const std::int32_t slot = slot_of[static_cast<std::size_t>(node_of[i])];
                    if (slot < 0) continue;
                    RunState& s = run[static_cast<std::size_t>(slot)];
                    const double v = X[i][f];
                    if (s.has_prev && v > s.prev) {
                        const GrowNode& nd = frontier[static_cast<std::size_t>(slot)];
                        const double GR = nd.G - s.GL;
                        const double HR = nd.H - s.HL;
                        const double gain =
                            0.5 * (split_term(s.GL, s.HL, params.lambda) +
                                   split_term(GR, HR, params.lambda) -
                                   split_term(nd.G, nd.H, params.lambda)) -
                            params.gamma;
                        BestSplit& b = best[static_cast<std::size_t>(slot)];
                        if (gain > b.gain) {  // ties keep the earlier (feature, threshold)
                            b.gain = gain;
                            b.feature = static_cast<int>(f);
                            b.threshold = 0.5 * (s.prev + v);
                            b.GL = s.GL;
                            b.HL = s.HL;
                        }
                    }
                    s.GL += grad[i];
                    s.HL += hess[i];
                    s.prev = v;
                    s.has_prev = true;
                }
            }

            std::vector<GrowNode> next;
            for (std::size_t s = 0; s < frontier.size(); ++s) {
                const GrowNode& nd = frontier[s];
                const BestSplit& b = best[s];
                auto& node = tree.nodes[static_cast<std::size_t>(nd.tree_index)];
                if (b.feature < 0) continue;  // stays a leaf; value already set

                node.feature = b.feature;
                node.threshold = b.threshold;
                node.gain = b.gain;
                model.feature_gain[static_cast<std::size_t>(b.feature)] += b.gain;

                const double GR = nd.G - b.GL;
                const double HR = nd.H - b.HL;
                const int left = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                tree.nodes.back().value = leaf_weight(b.GL, b.HL, params.lambda);
                const int right = static_cast<int>(tree.nodes.size());
                tree.nodes.emplace_back();
                tree.nodes.back().value = leaf_weight(GR, HR, params.lambda);
                tree.nodes[static_cast<std::size_t>(nd.tree_index)].left = left;
                tree.nodes[static_cast<std::size_t>(nd.tree_index)].right = right;

                const int child_depth = nd.depth + 1;
                if (params.max_depth <= 0 || child_depth < params.max_depth) {
                    next.push_back({left, b.GL, b.HL, child_depth});
                    next.push_back({right, GR, HR, child_depth});
                }
            }

            // route samples of split nodes to their children
            for (std::size_t i = 0; i < n; ++i) {
                const auto& node = tree.nodes[static_cast<std::size_t>(node_of[i])];
                if (node.feature < 0) continue;
                node_of[i] = X[i][static_cast<std::size_t>(node.feature)] < node.threshold
                                 ? node.left
                                 : node.right;
            }
            frontier = std::move(next);
        }

        for (std::size_t i = 0; i < n; ++i)
            margins[i] += params.eta * tree.nodes[static_cast<std::size_t>(node_of[i])].value;
        model.trees.push_back(std::move(tree));
    }
    return model;
}

std::map<int, double> importance_gain(const GbtModel& model) {
    double total = 0.0;
    for (double g : model.feature_gain) total += g;
    if (total <= 0.0) throw NoSplits();
    std::map<int, double> out;
    for (std::size_t f = 0; f < model.feature_gain.size(); ++f)
        if (model.feature_gain[f] > 0.0) out[static_cast<int>(f)] = model.feature_gain[f] / total;
    return out;
}

}  // namespace slampoint::models
