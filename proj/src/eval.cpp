#include "slampoint/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "json.hpp"
#include "slampoint/common.hpp"

namespace slampoint::eval {

using featureset::PreparedRow;
using models::Family;
using models::Hyperparams;
using models::TrainedModel;

// ---------------------------------------------------------------- metrics

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw LengthMismatch();
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1)
            (y_pred[i] == 1 ? cm.tp : cm.fn) += 1;
        else
            (y_pred[i] == 1 ? cm.fp : cm.tn) += 1;
    }
    return cm;
}

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw EmptyMatrix();
    Metrics m;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    m.precision = safe_div(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
    m.recall = safe_div(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
    m.f1 = safe_div(2.0 * m.precision * m.recall, m.precision + m.recall);
    return m;
}

double roc_auc(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw LengthMismatch();
    const std::size_t n = y_true.size();
    std::size_t n_pos = 0;
    for (int y : y_true) n_pos += y == 1;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw SingleClass();

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return a < b;
    });

    // mid-ranks over tied score runs
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (y_true[order[k]] == 1) pos_rank_sum += mid_rank;
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricSet score_predictions(const std::vector<int>& y_true, const std::vector<double>& scores,
                            double threshold) {
    std::vector<int> y_pred;
    y_pred.reserve(scores.size());
    for (double s : scores) y_pred.push_back(s >= threshold ? 1 : 0);
    const ConfusionMatrix cm = confusion(y_true, y_pred);

    MetricSet out;
    out.n_rows = cm.total();
    out.accuracy = metrics(cm).accuracy;
    // headline precision/recall/f1 follow the returner class (label 0)
    const Metrics returner = metrics(cm.flipped());
    out.precision = returner.precision;
    out.recall = returner.recall;
    out.f1 = returner.f1;
    try {
        out.roc_auc = roc_auc(y_true, scores);
        out.roc_defined = true;
    } catch (const SingleClass&) {
        out.roc_auc = 0.0;
        out.roc_defined = false;
    }
    return out;
}

// ---------------------------------------------------------------- reports

namespace {

nlohmann::json metric_set_json(const MetricSet& m) {
    nlohmann::json j;
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    if (m.roc_defined)
        j["roc_auc"] = m.roc_auc;
    else
        j["roc_auc"] = nullptr;
    j["n_rows"] = m.n_rows;
    return j;
}

}  // namespace

std::string eval_report_json(const EvalReport& report) {
    nlohmann::json j;
    j["family"] = report.family;
    j["serve"] = report.serve;
    j["seed"] = report.seed;
    j["split"] = report.split;
    j["positive_class"] = "returner";
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, value] : report.hyperparams.values) params[name] = value;
    j["hyperparams"] = std::move(params);
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : report.per_fold) folds.push_back(metric_set_json(f));
    j["per_fold"] = std::move(folds);
    j["mean"] = metric_set_json(report.mean);
    return j.dump(1) + "\n";
}

std::string eval_summary_header() {
    return "family\tserve\tsplit\tn_rows\taccuracy\tprecision\trecall\tf1\troc_auc";
}

std::string eval_summary_row(const EvalReport& report) {
    std::string row = report.family + "\t" + std::to_string(report.serve) + "\t" + report.split +
                      "\t" + std::to_string(report.mean.n_rows);
    for (double v : {report.mean.accuracy, report.mean.precision, report.mean.recall,
                     report.mean.f1})
        row += "\t" + fmt_double(v, 4);
    row += "\t" + (report.mean.roc_defined ? fmt_double(report.mean.roc_auc, 4) : "-");
    return row;
}

// ---------------------------------------------------------------- fitting

models::TrainedModel fit_model_spec(const ModelSpec& spec, const std::vector<PreparedRow>& rows) {
    Hyperparams hp = spec.hyperparams.values.empty() ? models::default_hyperparams(spec.family)
                                                     : spec.hyperparams;
    hp.validate();

    TrainedModel model;
    model.family = spec.family;
    model.seed = spec.seed;
    model.hyperparams = hp;
    model.schema = featureset::fit_schema(rows);
    const featureset::FeatureMatrix matrix = featureset::transform(rows, model.schema);

    std::set<std::string> ids(matrix.match_id.begin(), matrix.match_id.end());
    model.training_match_ids.assign(ids.begin(), ids.end());
    int serve = rows.empty() ? 0 : rows[0].serve_number;
    for (const auto& r : rows)
        if (r.serve_number != serve) serve = 0;
    model.serve = serve;

    switch (spec.family) {
        case Family::Baseline:
            model.model = models::fit_prior_baseline(matrix.y);
            break;
        case Family::Logistic:
            model.model = models::fit_logistic(matrix.x, matrix.y, hp.at("alpha"),
                                               static_cast<int>(hp.at("epochs")), spec.seed);
            break;
        case Family::Forest: {
            models::ForestParams p;
            p.n_trees = static_cast<int>(hp.at("n_trees"));
            p.m_try = static_cast<int>(hp.at("m_try"));
            p.max_depth = static_cast<int>(hp.at("max_depth"));
            p.min_leaf = static_cast<int>(hp.at("min_leaf"));
            p.seed = spec.seed;
            model.model = models::fit_forest(matrix.x, matrix.y, p);
            break;
        }
        case Family::AdaBoost: {
            models::AdaBoostParams p;
            p.rounds = static_cast<int>(hp.at("rounds"));
            p.weak_depth = static_cast<int>(hp.at("weak_depth"));
            model.model = models::fit_adaboost(matrix.x, matrix.y, p);
            break;
        }
        case Family::Gbt: {
            models::GbtParams p;
            p.rounds = static_cast<int>(hp.at("rounds"));
            p.eta = hp.at("eta");
            p.lambda = hp.at("lambda");
            p.gamma = hp.at("gamma");
            p.max_depth = static_cast<int>(hp.at("max_depth"));
            p.scale_pos_weight = hp.at("scale_pos_weight");
            p.seed = spec.seed;
            model.model = models::fit_gbt(matrix.x, matrix.y, p);
            break;
        }
    }
    return model;
}

MetricSet evaluate_rows(const TrainedModel& model, const std::vector<PreparedRow>& rows,
                        bool guard_leakage) {
    if (guard_leakage) {
        std::set<std::string> trained(model.training_match_ids.begin(),
                                      model.training_match_ids.end());
        for (const auto& r : rows)
            if (trained.count(r.match_id)) throw LeakageDetected(r.match_id);
    }
    const featureset::FeatureMatrix matrix = featureset::transform(rows, model.schema);
    const std::vector<double> scores = models::predict_proba(model, matrix.x);
    return score_predictions(matrix.y, scores);
}

// ---------------------------------------------------------------- cross-validation

EvalReport cross_validate(const ModelSpec& spec, const std::vector<PreparedRow>& rows,
                          const featureset::SplitPlan& plan) {
    std::vector<PreparedRow> pool;
    for (const auto& r : rows)
        if (plan.fold_of.count(r.match_id)) pool.push_back(r);

    EvalReport report;
    report.family = models::family_name(spec.family);
    report.seed = spec.seed;
    report.split = "cv-" + std::to_string(featureset::SplitPlan::kFolds);
    report.hyperparams =
        spec.hyperparams.values.empty() ? models::default_hyperparams(spec.family) : spec.hyperparams;
    int serve = pool.empty() ? 0 : pool[0].serve_number;
    for (const auto& r : pool)
        if (r.serve_number != serve) serve = 0;
    report.serve = serve;

    for (int fold = 0; fold < featureset::SplitPlan::kFolds; ++fold) {
        std::vector<PreparedRow> fit_rows, eval_rows;
        for (const auto& r : pool)
            (plan.fold_of.at(r.match_id) == fold ? eval_rows : fit_rows).push_back(r);
        if (eval_rows.empty() || fit_rows.empty()) {
            warn("fold " + std::to_string(fold) + " is empty, skipped");
            continue;
        }
        {  // fold hygiene: fitting and evaluation matches must not meet
            std::set<std::string> fit_ids, eval_ids;
            for (const auto& r : fit_rows) fit_ids.insert(r.match_id);
            for (const auto& r : eval_rows) eval_ids.insert(r.match_id);
            for (const auto& id : eval_ids)
                if (fit_ids.count(id))
                    throw std::logic_error("fold assignment places match " + id + " on both sides");
        }
        ModelSpec fold_spec = spec;
        fold_spec.seed = splitmix64(spec.seed ^ fnv1a64("fold-" + std::to_string(fold)));
        const TrainedModel model = fit_model_spec(fold_spec, fit_rows);
        MetricSet m = evaluate_rows(model, eval_rows);
        if (!m.roc_defined)
            warn("fold " + std::to_string(fold) +
                 " holds a single class; roc_auc excluded from the mean");
        report.per_fold.push_back(m);
    }

    MetricSet& mean = report.mean;
    std::size_t auc_folds = 0;
    for (const auto& f : report.per_fold) {
        mean.accuracy += f.accuracy;
        mean.precision += f.precision;
        mean.recall += f.recall;
        mean.f1 += f.f1;
        mean.n_rows += f.n_rows;
        if (f.roc_defined) {
            mean.roc_auc += f.roc_auc;
            ++auc_folds;
        }
    }
    const double k = static_cast<double>(report.per_fold.size());
    if (k > 0) {
        mean.accuracy /= k;
        mean.precision /= k;
        mean.recall /= k;
        mean.f1 /= k;
    }
    if (auc_folds > 0)
        mean.roc_auc /= static_cast<double>(auc_folds);
    else
        mean.roc_defined = false;
    return report;
}

// ---------------------------------------------------------------- search

SearchSpace default_search_space(Family family) {
    SearchSpace space;
    using Kind = ParamDist::Kind;
    auto add = [&](const char* name, ParamDist dist) { space.dists[name] = std::move(dist); };
    switch (family) {
        case Family::Baseline:
            break;  // nothing to tune
        case Family::Logistic:
            add("alpha", {Kind::LogUniform, 1e-3, 0.3, {}});
            add("epochs", {Kind::IntUniform, 10, 100, {}});
            break;
        case Family::Forest:
            add("n_trees", {Kind::IntUniform, 20, 200, {}});
            add("m_try", {Kind::Categorical, 0, 0, {-1, 0, 4, 8, 16}});
            add("max_depth", {Kind::Categorical, 0, 0, {-1, 6, 10, 16}});
            add("min_leaf", {Kind::IntUniform, 1, 20, {}});
            break;
        case Family::AdaBoost:
            add("rounds", {Kind::IntUniform, 20, 150, {}});
            add("weak_depth", {Kind::IntUniform, 1, 3, {}});
            break;
        case Family::Gbt:
            add("rounds", {Kind::IntUniform, 30, 300, {}});
            add("eta", {Kind::LogUniform, 0.02, 0.4, {}});
            add("lambda", {Kind::Uniform, 0.0, 5.0, {}});
            add("gamma", {Kind::Uniform, 0.0, 1.0, {}});
            add("max_depth", {Kind::IntUniform, 2, 8, {}});
            add("scale_pos_weight", {Kind::Uniform, 0.8, 2.0, {}});
            break;
    }
    return space;
}

namespace {

double draw_param(const ParamDist& dist, Rng& rng) {
    switch (dist.kind) {
        case ParamDist::Kind::Uniform:
            return dist.lo + (dist.hi - dist.lo) * rng.next_double();
        case ParamDist::Kind::LogUniform: {
            const double lo = std::log(dist.lo);
            const double hi = std::log(dist.hi);
            return std::exp(lo + (hi - lo) * rng.next_double());
        }
        case ParamDist::Kind::IntUniform: {
            const auto lo = static_cast<long long>(dist.lo);
            const auto hi = static_cast<long long>(dist.hi);
            return static_cast<double>(lo + static_cast<long long>(rng.below(
                                                static_cast<std::uint64_t>(hi - lo + 1))));
        }
        case ParamDist::Kind::Categorical:
            return dist.choices[static_cast<std::size_t>(rng.below(dist.choices.size()))];
    }
    return dist.lo;
}

// mean roc_auc first, then f1; undefined auc never beats a defined one
bool trial_better(const EvalReport& challenger, const EvalReport& incumbent) {
    const double ca = challenger.mean.roc_defined ? challenger.mean.roc_auc : -1.0;
    const double ia = incumbent.mean.roc_defined ? incumbent.mean.roc_auc : -1.0;
    if (ca != ia) return ca > ia;
    return challenger.mean.f1 > incumbent.mean.f1;
}

}  // namespace

SearchResult random_search(const SearchSpace& space, Family family,
                           const std::vector<PreparedRow>& rows,
                           const featureset::SplitPlan& plan, std::uint64_t model_seed) {
    if (space.budget < 1) throw std::invalid_argument("random_search: budget must be >= 1");
    Rng rng = Rng::derive(space.seed, "random-search");

    SearchResult result;
    for (int t = 0; t < space.budget; ++t) {
        Hyperparams params = models::default_hyperparams(family);
        for (const auto& [name, dist] : space.dists) params.values[name] = draw_param(dist, rng);
        params.validate();

        ModelSpec spec{family, params, model_seed};
        Trial trial;
        trial.index = t;
        trial.params = params;
        trial.report = cross_validate(spec, rows, plan);
        result.trials.push_back(std::move(trial));

        if (t == 0 || trial_better(result.trials.back().report, result.best_report)) {
            result.best = result.trials.back().params;
            result.best_report = result.trials.back().report;
            result.best_index = t;
        }
    }
    return result;
}

void write_trial_log(std::ostream& out, const SearchResult& result) {
    out << "# slampoint trial log v1\n";
    out << "# trials=" << result.trials.size() << " best=" << result.best_index << "\n";
    out << "trial\troc_auc\tf1\taccuracy\tprecision\trecall\tparams\n";
    for (const auto& t : result.trials) {
        out << t.index << "\t"
            << (t.report.mean.roc_defined ? fmt_double(t.report.mean.roc_auc, 6) : "-") << "\t"
            << fmt_double(t.report.mean.f1, 6) << "\t" << fmt_double(t.report.mean.accuracy, 6)
            << "\t" << fmt_double(t.report.mean.precision, 6) << "\t"
            << fmt_double(t.report.mean.recall, 6) << "\t";
        std::vector<std::string> kv;
        for (const auto& [name, value] : t.params.values)
            kv.push_back(name + "=" + fmt_double_exact(value));
        out << join(kv.begin(), kv.end(), ";") << "\n";
    }
}

}  // namespace slampoint::eval
