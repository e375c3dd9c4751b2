#include <cmath>

#include "slampoint/models.hpp"

namespace slampoint::models {

double AdaBoostModel::score_one(const std::vector<double>& x) const {
    double score = 0.0;
    for (std::size_t t = 0; t < learners.size(); ++t) {
        const double vote = learners[t].predict_one(x) >= 0.5 ? 1.0 : -1.0;
        score += alphas[t] * vote;
    }
    return score;
}

double AdaBoostModel::predict_one(const std::vector<double>& x) const {
    // sign(score) decides the class; sigmoid(2*score) is the documented
    // probability convention
    return sigmoid(2.0 * score_one(x));
}

AdaBoostModel fit_adaboost(const Matrix& X, const std::vector<int>& y,
                           const AdaBoostParams& params) {
    if (X.size() != y.size()) throw DimensionMismatch("fit_adaboost: |X| != |y|");
    const std::size_t n = X.size();

    AdaBoostModel model;
    model.params = params;
    if (n == 0) return model;

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    TreeParams tp;
    tp.max_depth = params.weak_depth;

    for (int round = 0; round < params.rounds; ++round) {
        Tree learner = fit_tree(X, y, weights, tp);

        double error = 0.0;
        std::vector<int> votes(n);
        for (std::size_t i = 0; i < n; ++i) {
            votes[i] = learner.predict_one(X[i]) >= 0.5 ? 1 : 0;
            if (votes[i] != y[i]) error += weights[i];
        }

        if (error >= 0.5) break;  // no better than chance: discard and stop

        const double eps = std::max(error, 1e-10);  // clamp for the perfect learner
        const double alpha = 0.5 * std::log((1.0 - eps) / eps);
        model.learners.push_back(std::move(learner));
        model.alphas.push_back(alpha);
        model.round_errors.push_back(error);

        if (error == 0.0) break;  // already perfect

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double margin = (y[i] == 1 ? 1.0 : -1.0) * (votes[i] == 1 ? 1.0 : -1.0);
            weights[i] *= std::exp(-alpha * margin);
            total += weights[i];
        }
        for (auto& w : weights) w /= total;
    }
    return model;
}

}  // namespace slampoint::models
