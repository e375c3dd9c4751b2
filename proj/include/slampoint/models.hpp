#pragma once

// The five classifier families, implemented from scratch: prior baseline,
// logistic regression via SGD, entropy decision trees with bagging, discrete
// AdaBoost, and second-order gradient-boosted trees.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace slampoint::models {

using Matrix = std::vector<std::vector<double>>;  // row-major

// ---------------------------------------------------------------- errors

struct EmptyInput : std::runtime_error {
    explicit EmptyInput(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DivergenceDetected : std::runtime_error {
    explicit DivergenceDetected(int epoch)
        : std::runtime_error("training loss became non-finite at epoch " + std::to_string(epoch)) {
    }
};

struct SchemaMismatch : std::runtime_error {
    explicit SchemaMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NoSplits : std::runtime_error {
    NoSplits() : std::runtime_error("model contains no splits") {}
};

// ---------------------------------------------------------------- baseline

// Predicts the training-set server win rate for every input.
struct BaselineModel {
    double p = 0.5;
    std::size_t n_fit = 0;

    double predict_one(const std::vector<double>&) const { return p; }
};

BaselineModel fit_prior_baseline(const std::vector<int>& labels);  // throws EmptyInput

// ---------------------------------------------------------------- logistic

// 1/(1+e^-z); the exponent is clamped to |z| <= 500 to avoid overflow.
double sigmoid(double z);

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double learning_rate = 0.01;
    int epochs = 50;
    std::uint64_t seed = 0;
    std::vector<double> epoch_loss;  // mean loss after each epoch

    double predict_one(const std::vector<double>& x) const;
};

// Mean binary cross-entropy with probabilities clamped to [1e-12, 1-1e-12].
double logistic_loss(const std::vector<double>& weights, double bias, const Matrix& X,
                     const std::vector<int>& y);  // throws DimensionMismatch

// Per-sample gradient of the loss at (weights, bias): grad_w = (p - y) x,
// grad_b = p - y. Exposed for the finite-difference check.
void logistic_gradient(const std::vector<double>& weights, double bias,
                       const std::vector<double>& x, int y, std::vector<double>& grad_w,
                       double& grad_b);

// Per-sample SGD with a deterministic per-epoch shuffle.
// Throws DivergenceDetected if the epoch loss becomes non-finite.
LinearModel fit_logistic(const Matrix& X, const std::vector<int>& y, double alpha, int epochs,
                         std::uint64_t seed);

// ---------------------------------------------------------------- trees

// Shannon entropy in bits of a binary label set. Throws EmptyInput.
double entropy(const std::vector<int>& labels);
double weighted_entropy(const std::vector<int>& labels, const std::vector<double>& weights,
                        const std::vector<std::size_t>& indices);

// Flat tree; node 0 is the root. Internal nodes route x[feature] < threshold
// to `left`; leaves carry `value` (a class vote for forest/AdaBoost trees,
// an additive score for boosted trees).
struct Tree {
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        double value = 0.0;
        double gain = 0.0;
        int left = -1;
        int right = -1;
    };
    std::vector<Node> nodes;

    bool empty() const { return nodes.empty(); }
    double predict_one(const std::vector<double>& x) const;
    int depth() const;
    std::size_t n_leaves() const;
};

struct TreeParams {
    int max_depth = -1;      // -1 = unlimited
    int min_leaf = 1;        // minimum samples on each side of a split
    int feature_subset = -1; // m_try; -1 or >= d uses every feature, no RNG draw
    std::uint64_t seed = 0;
};

// Greedy entropy-gain splitter. Thresholds are midpoints of consecutive
// distinct sorted values; gain ties break to the lower feature index, then
// the lower threshold. Weights may be empty (uniform). Leaf value is the
// weighted majority class, ties to class 0.
Tree fit_tree(const Matrix& X, const std::vector<int>& y, const std::vector<double>& weights,
              const TreeParams& params);

// ---------------------------------------------------------------- forest

struct ForestParams {
    int n_trees = 100;
    int m_try = 0;       // 0 = floor(sqrt(d)); -1 = all features
    int max_depth = -1;
    int min_leaf = 1;
    bool bootstrap = true;  // test hook: false fits every tree on the full sample
    std::uint64_t seed = 0;
};

struct ForestModel {
    std::vector<Tree> trees;
    ForestParams params;

    // fraction of trees voting class 1
    double predict_one(const std::vector<double>& x) const;
};

ForestModel fit_forest(const Matrix& X, const std::vector<int>& y, const ForestParams& params);

// ---------------------------------------------------------------- adaboost

struct AdaBoostParams {
    int rounds = 50;
    int weak_depth = 1;  // stumps by default
};

struct AdaBoostModel {
    std::vector<Tree> learners;   // vote trees, leaves in {0,1}
    std::vector<double> alphas;   // stage weights, aligned with learners
    AdaBoostParams params;
    std::vector<double> round_errors;  // weighted error per kept round

    double score_one(const std::vector<double>& x) const;    // sum alpha_t h_t, h in {-1,+1}
    double predict_one(const std::vector<double>& x) const;  // sigmoid(2 * score)
};

AdaBoostModel fit_adaboost(const Matrix& X, const std::vector<int>& y,
                           const AdaBoostParams& params);

// ---------------------------------------------------------------- gbt

struct GbtParams {
    int rounds = 100;
    double eta = 0.3;     // shrinkage
    double lambda = 1.0;  // leaf-weight L2 penalty
    double gamma = 0.0;   // per-split penalty
    int max_depth = 6;
    double scale_pos_weight = 1.0;
    std::uint64_t seed = 0;  // reserved; exact greedy growth draws nothing
};

struct GbtModel {
    std::vector<Tree> trees;  // leaves carry additive scores
    GbtParams params;
    double base_score = 0.0;  // logit of the training positive rate
    std::vector<double> feature_gain;  // summed split gain per feature

    double margin_one(const std::vector<double>& x) const;   // base + eta * sum of leaves
    double predict_one(const std::vector<double>& x) const;  // sigmoid(margin)
};

GbtModel fit_gbt(const Matrix& X, const std::vector<int>& y, const GbtParams& params);

// Normalized per-feature gain shares (sum 1). Throws NoSplits for an
// all-leaf model.
std::map<int, double> importance_gain(const GbtModel& model);

// ---------------------------------------------------------------- hyperparams

struct HyperRange {
    double lo = 0.0;
    double hi = 0.0;
    bool log_scale = false;
    bool integer = false;
};

// Name -> value map with declared ranges; serialized with every model.
struct Hyperparams {
    std::map<std::string, double> values;
    std::map<std::string, HyperRange> ranges;

    void validate() const;  // throws std::out_of_range when a value leaves its range
    double at(const std::string& name) const;
};

enum class Family { Baseline, Logistic, Forest, AdaBoost, Gbt };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Pinned defaults, chosen once and frozen so runs stay comparable:
// logistic alpha 0.01 / 50 epochs; forest 100 trees, m_try sqrt(d), depth
// unlimited, min_leaf 1; AdaBoost 50 rounds of stumps; GBT 100 rounds,
// eta 0.3, lambda 1, gamma 0, depth 6, scale_pos_weight 1.
Hyperparams default_hyperparams(Family f);

}  // namespace slampoint::models
