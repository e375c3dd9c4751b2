#include "slampoint/models.hpp"

#include <cmath>

#include "slampoint/common.hpp"

namespace slampoint::models {

// ---------------------------------------------------------------- baseline

BaselineModel fit_prior_baseline(const std::vector<int>& labels) {
    if (labels.empty()) throw EmptyInput("fit_prior_baseline: no labels");
    double wins = 0.0;
    for (int y : labels) wins += y;
    BaselineModel m;
    m.p = wins / static_cast<double>(labels.size());
    m.n_fit = labels.size();
    return m;
}

// ---------------------------------------------------------------- logistic

double sigmoid(double z) {
    if (z > 500.0) z = 500.0;
    if (z < -500.0) z = -500.0;
    return 1.0 / (1.0 + std::exp(-z));
}

double LinearModel::predict_one(const std::vector<double>& x) const {
    double z = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) z += weights[i] * x[i];
    return sigmoid(z);
}

double logistic_loss(const std::vector<double>& weights, double bias, const Matrix& X,
                     const std::vector<int>& y) {
    if (X.size() != y.size()) throw DimensionMismatch("logistic_loss: |X| != |y|");
    if (X.empty()) throw EmptyInput("logistic_loss: no rows");
    constexpr double eps = 1e-12;
    double total = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != weights.size())
            throw DimensionMismatch("logistic_loss: row width != weight length");
        double z = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * X[i][j];
        double p = sigmoid(z);
        if (p < eps) p = eps;
        if (p > 1.0 - eps) p = 1.0 - eps;
        total += y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(X.size());
}

void logistic_gradient(const std::vector<double>& weights, double bias,
                       const std::vector<double>& x, int y, std::vector<double>& grad_w,
                       double& grad_b) {
    if (x.size() != weights.size())
        throw DimensionMismatch("logistic_gradient: row width != weight length");
    double z = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
    const double residual = sigmoid(z) - y;
    grad_w.assign(weights.size(), 0.0);
    for (std::size_t j = 0; j < weights.size(); ++j) grad_w[j] = residual * x[j];
    grad_b = residual;
}

LinearModel fit_logistic(const Matrix& X, const std::vector<int>& y, double alpha, int epochs,
                         std::uint64_t seed) {
    if (X.empty()) throw EmptyInput("fit_logistic: no rows");
    if (X.size() != y.size()) throw DimensionMismatch("fit_logistic: |X| != |y|");
    const std::size_t d = X[0].size();

    LinearModel m;
    m.weights.assign(d, 0.0);
    m.learning_rate = alpha;
    m.epochs = epochs;
    m.seed = seed;

    Rng rng = Rng::derive(seed, "logistic-sgd");
    std::vector<std::size_t> order(X.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int e = 0; e < epochs; ++e) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            double z = m.bias;
            for (std::size_t j = 0; j < d; ++j) z += m.weights[j] * X[i][j];
            const double residual = sigmoid(z) - y[i];
            for (std::size_t j = 0; j < d; ++j) m.weights[j] -= alpha * residual * X[i][j];
            m.bias -= alpha * residual;
        }
        const double loss = logistic_loss(m.weights, m.bias, X, y);
        if (!std::isfinite(loss)) throw DivergenceDetected(e);
        m.epoch_loss.push_back(loss);
    }
    return m;
}

// ---------------------------------------------------------------- hyperparams

void Hyperparams::validate() const {
    for (const auto& [name, value] : values) {
        auto it = ranges.find(name);
        if (it == ranges.end()) continue;
        if (value < it->second.lo || value > it->second.hi)
            throw std::out_of_range("hyperparameter " + name + "=" + fmt_double_exact(value) +
                                    " outside [" + fmt_double_exact(it->second.lo) + ", " +
                                    fmt_double_exact(it->second.hi) + "]");
    }
}

double Hyperparams::at(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw std::out_of_range("unknown hyperparameter: " + name);
    return it->second;
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Baseline: return "baseline";
        case Family::Logistic: return "logistic";
        case Family::Forest: return "forest";
        case Family::AdaBoost: return "adaboost";
        case Family::Gbt: return "gbt";
    }
    return "baseline";
}

Family family_from_name(const std::string& name) {
    if (name == "baseline") return Family::Baseline;
    if (name == "logistic") return Family::Logistic;
    if (name == "forest") return Family::Forest;
    if (name == "adaboost") return Family::AdaBoost;
    if (name == "gbt" || name == "xgboost") return Family::Gbt;
    throw std::invalid_argument("unknown model family: " + name);
}

Hyperparams default_hyperparams(Family f) {
    Hyperparams h;
    auto set = [&](const char* name, double value, HyperRange range) {
        h.values[name] = value;
        h.ranges[name] = range;
    };
    switch (f) {
        case Family::Baseline:
            break;
        case Family::Logistic:
            set("alpha", 0.01, {1e-4, 1.0, true, false});
            set("epochs", 50, {5, 200, false, true});
            break;
        case Family::Forest:
            set("n_trees", 100, {10, 300, false, true});
            set("m_try", 0, {-1, 512, false, true});        // 0 = sqrt(d), -1 = all
            set("max_depth", -1, {-1, 30, false, true});    // -1 = unlimited
            set("min_leaf", 1, {1, 50, false, true});
            break;
        case Family::AdaBoost:
            set("rounds", 50, {10, 200, false, true});
            set("weak_depth", 1, {1, 3, false, true});
            break;
        case Family::Gbt:
            set("rounds", 100, {10, 300, false, true});
            set("eta", 0.3, {0.01, 0.5, true, false});
            set("lambda", 1.0, {0.0, 10.0, false, false});
            set("gamma", 0.0, {0.0, 5.0, false, false});
            set("max_depth", 6, {2, 10, false, true});
            set("scale_pos_weight", 1.0, {0.5, 3.0, false, false});
            break;
    }
    return h;
}

}  // namespace slampoint::models
