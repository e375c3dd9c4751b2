#pragma once

// Metric suite (confusion, accuracy/precision/recall/F1, rank-based ROC-AUC),
// the match-level 10-fold cross-validation engine, and random search.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slampoint/featureset.hpp"
#include "slampoint/model_io.hpp"
#include "slampoint/models.hpp"

namespace slampoint::eval {

// ---------------------------------------------------------------- errors

struct LengthMismatch : std::runtime_error {
    LengthMismatch() : std::runtime_error("label and prediction lengths differ") {}
};

struct EmptyMatrix : std::runtime_error {
    EmptyMatrix() : std::runtime_error("confusion matrix has no entries") {}
};

struct SingleClass : std::runtime_error {
    SingleClass() : std::runtime_error("roc_auc needs both classes present") {}
};

struct LeakageDetected : std::runtime_error {
    explicit LeakageDetected(const std::string& match_id)
        : std::runtime_error("evaluation match " + match_id +
                             " appears in the model's training matches") {}
};

// ---------------------------------------------------------------- metrics

// Positive class = "server wins" = label 1.
struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
    // The same counts viewed with the returner (label 0) as positive.
    ConfusionMatrix flipped() const { return {tn, fn, tp, fp}; }
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// accuracy=(tp+tn)/total, precision=tp/(tp+fp), recall=tp/(tp+fn),
// f1 = harmonic mean; every 0/0 is 0 by convention. Throws EmptyMatrix.
Metrics metrics(const ConfusionMatrix& cm);

// Rank-based ROC-AUC with ties counted 1/2. Throws SingleClass.
double roc_auc(const std::vector<int>& y_true, const std::vector<double>& scores);

// ---------------------------------------------------------------- reports

// One evaluation selection. The headline precision/recall/f1 are computed
// for the returner class (label 0): with the server winning ~2/3 of points,
// server-positive metrics saturate and hide model differences, while
// accuracy and roc_auc are identical for either class orientation.
struct MetricSet {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double roc_auc = 0.0;
    bool roc_defined = true;
    std::size_t n_rows = 0;
};

MetricSet score_predictions(const std::vector<int>& y_true, const std::vector<double>& scores,
                            double threshold = 0.5);

struct EvalReport {
    std::string family;
    int serve = 1;
    std::uint64_t seed = 0;
    std::string split;  // "cv-10" | "test"
    models::Hyperparams hyperparams;
    std::vector<MetricSet> per_fold;  // empty for single-split evaluations
    MetricSet mean;                   // arithmetic mean over folds (auc over defined folds)
};

std::string eval_report_json(const EvalReport& report);
std::string eval_summary_header();                      // TSV header
std::string eval_summary_row(const EvalReport& report); // one TSV row

// ---------------------------------------------------------------- fitting

struct ModelSpec {
    models::Family family = models::Family::Baseline;
    models::Hyperparams hyperparams;  // defaults when empty
    std::uint64_t seed = 0;
};

// Fits schema on `rows`, transforms, fits the family. Records the rows'
// match ids as the training set.
models::TrainedModel fit_model_spec(const ModelSpec& spec,
                                    const std::vector<featureset::PreparedRow>& rows);

// Transforms with the model's own schema and scores. Throws LeakageDetected
// when guard_leakage and any row's match id is among the model's training
// matches.
MetricSet evaluate_rows(const models::TrainedModel& model,
                        const std::vector<featureset::PreparedRow>& rows,
                        bool guard_leakage = false);

// 10-fold CV over the plan's train+validation matches. Standardization is
// refit on each fold's fitting side. A fold holding a single class gets its
// roc_auc excluded from the mean with a warning.
EvalReport cross_validate(const ModelSpec& spec, const std::vector<featureset::PreparedRow>& rows,
                          const featureset::SplitPlan& plan);

// ---------------------------------------------------------------- search

struct ParamDist {
    enum class Kind { Uniform, LogUniform, IntUniform, Categorical };
    Kind kind = Kind::Uniform;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> choices;  // Categorical only
};

struct SearchSpace {
    std::map<std::string, ParamDist> dists;  // drawn in name order
    int budget = 20;
    std::uint64_t seed = 0;
};

SearchSpace default_search_space(models::Family family);

struct Trial {
    int index = 0;
    models::Hyperparams params;
    EvalReport report;
};

struct SearchResult {
    models::Hyperparams best;
    EvalReport best_report;
    int best_index = 0;
    std::vector<Trial> trials;
};

// Draws `budget` configurations, cross-validates each, selects by mean
// roc_auc (ties: higher f1, then first drawn).
SearchResult random_search(const SearchSpace& space, models::Family family,
                           const std::vector<featureset::PreparedRow>& rows,
                           const featureset::SplitPlan& plan, std::uint64_t model_seed);

void write_trial_log(std::ostream& out, const SearchResult& result);

}  // namespace slampoint::eval
