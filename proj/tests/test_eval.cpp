#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "slampoint/eval.hpp"
#include "support/oracles.hpp"
#include "support/simulator.hpp"
#include "support/test_util.hpp"

using namespace slampoint;
using namespace slampoint::eval;
using featureset::PreparedRow;
using models::Family;
namespace ts = slampoint::testsupport;

namespace {

// Prepared rows + a split plan over n simulated matches (n >= 20).
struct SimBench {
    std::vector<PreparedRow> rows;
    featureset::SplitPlan plan;
    std::vector<std::string> ids;
};

SimBench make_bench(int n_matches, std::uint64_t seed, int serve = 0) {
    SimBench bench;
    auto sims = ts::default_sim_matches(n_matches, seed);
    auto ds = ts::assemble_sim(sims, ts::default_rankings(sims));
    auto rows = featureset::prepare_dataset(ds);
    if (serve != 0) {
        auto [first, second] = featureset::split_by_serve(rows);
        bench.rows = serve == 1 ? std::move(first) : std::move(second);
    } else {
        bench.rows = std::move(rows);
    }
    for (const auto& m : ds.matches) bench.ids.push_back(m.meta.match_id);
    bench.plan = featureset::make_split_plan(bench.ids, seed);
    return bench;
}

}  // namespace

// ---------------------------------------------------------------- metrics

TEST_CASE("confusion counts with the server as positive") {
    auto cm = confusion({1, 1, 1, 0, 0, 1}, {1, 0, 1, 1, 0, 1});
    CHECK(cm.tp == 3);
    CHECK(cm.fn == 1);
    CHECK(cm.fp == 1);
    CHECK(cm.tn == 1);
    CHECK(cm.total() == 6);
    auto flipped = cm.flipped();
    CHECK(flipped.tp == 1);
    CHECK(flipped.fp == 1);
    CHECK(flipped.tn == 3);
    CHECK(flipped.fn == 1);
    CHECK_THROWS_AS(confusion({1, 0}, {1}), LengthMismatch);
}

TEST_CASE("metric formulas and the zero conventions") {
    ConfusionMatrix cm{6, 2, 8, 4};  // tp fp tn fn
    auto m = metrics(cm);
    CHECK(m.accuracy == doctest::Approx(14.0 / 20.0));
    CHECK(m.precision == doctest::Approx(6.0 / 8.0));
    CHECK(m.recall == doctest::Approx(6.0 / 10.0));
    CHECK(m.f1 == doctest::Approx(2.0 * 0.75 * 0.6 / (0.75 + 0.6)));

    // never predicted positive: precision 0/0 -> 0; no positives at all:
    // recall 0/0 -> 0; f1 collapses to 0
    auto never_pred = metrics(ConfusionMatrix{0, 0, 5, 3});
    CHECK(never_pred.precision == 0.0);
    CHECK(never_pred.f1 == 0.0);
    auto no_pos = metrics(ConfusionMatrix{0, 2, 5, 0});
    CHECK(no_pos.recall == 0.0);
    CHECK_THROWS_AS(metrics(ConfusionMatrix{}), EmptyMatrix);
}

TEST_CASE("roc_auc agrees with the pairwise oracle over 200 random cases") {
    Rng rng(1999);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(40);
        std::vector<int> y(n);
        std::vector<double> s(n);
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.below(2));
            (y[i] ? has1 : has0) = true;
            // coarse grid scores force plenty of ties
            s[i] = static_cast<double>(rng.below(6)) / 5.0;
        }
        if (!has0 || !has1) {
            CHECK_THROWS_AS(roc_auc(y, s), SingleClass);
            continue;
        }
        INFO("trial ", trial);
        CHECK(roc_auc(y, s) == doctest::Approx(ts::pairwise_auc(y, s)).epsilon(1e-12));
    }
}

TEST_CASE("roc_auc hand values and tie handling") {
    // perfect, inverted, and a mid-rank tie case
    CHECK(roc_auc({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9}) == doctest::Approx(1.0));
    CHECK(roc_auc({0, 0, 1, 1}, {0.9, 0.8, 0.2, 0.1}) == doctest::Approx(0.0));
    // one tied pair across classes contributes one half
    CHECK(roc_auc({0, 1}, {0.5, 0.5}) == doctest::Approx(0.5));
    CHECK(roc_auc({0, 1, 1}, {0.5, 0.5, 0.9}) == doctest::Approx(0.75));
    // every score equal: pure coin flip
    CHECK(roc_auc({0, 1, 0, 1}, {0.3, 0.3, 0.3, 0.3}) == doctest::Approx(0.5));
}

TEST_CASE("roc_auc is invariant under strictly monotone score transforms") {
    Rng rng(42);
    std::vector<int> y;
    std::vector<double> raw, squashed;
    for (int i = 0; i < 200; ++i) {
        y.push_back(static_cast<int>(rng.below(2)));
        double v = rng.uniform(-4.0, 4.0);
        if (rng.below(4) == 0) v = std::round(v);  // inject ties
        raw.push_back(v);
        squashed.push_back(1.0 / (1.0 + std::exp(-v)));
    }
    CHECK(roc_auc(y, raw) == roc_auc(y, squashed));
}

TEST_CASE("score_predictions reports the returner class") {
    // y: three server wins, one returner win; scores threshold at 0.5
    std::vector<int> y = {1, 1, 1, 0};
    std::vector<double> s = {0.9, 0.9, 0.1, 0.1};
    auto m = score_predictions(y, s);
    CHECK(m.n_rows == 4);
    CHECK(m.accuracy == doctest::Approx(0.75));
    // returner view: one true returner, predicted returner twice -> one hit
    CHECK(m.precision == doctest::Approx(0.5));
    CHECK(m.recall == doctest::Approx(1.0));
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
    CHECK(m.roc_defined);
    CHECK(m.roc_auc == doctest::Approx((2.0 + 0.5) / 3.0));
}

TEST_CASE("always predicting the server zeroes the returner metrics") {
    std::vector<int> y = {1, 0, 1, 0, 1};
    std::vector<double> s = {0.9, 0.8, 0.7, 0.9, 0.6};  // all above threshold
    auto m = score_predictions(y, s);
    CHECK(m.accuracy == doctest::Approx(0.6));
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.roc_defined);  // both classes exist; only the threshold is blunt
}

TEST_CASE("single-class labels leave the roc undefined but score the rest") {
    std::vector<int> y = {1, 1, 1};
    std::vector<double> s = {0.9, 0.4, 0.8};
    auto m = score_predictions(y, s);
    CHECK(!m.roc_defined);
    CHECK(m.accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(m.n_rows == 3);
}

TEST_CASE("threshold parameter moves the decision boundary") {
    std::vector<int> y = {1, 0};
    std::vector<double> s = {0.45, 0.2};
    CHECK(score_predictions(y, s, 0.5).accuracy == doctest::Approx(0.5));
    CHECK(score_predictions(y, s, 0.4).accuracy == doctest::Approx(1.0));
}

// ---------------------------------------------------------------- reports

TEST_CASE("eval report JSON is well-formed and complete") {
    EvalReport r;
    r.family = "logistic";
    r.serve = 2;
    r.seed = 99;
    r.split = "cv-10";
    r.hyperparams = models::default_hyperparams(Family::Logistic);
    MetricSet fold;
    fold.accuracy = 0.7;
    fold.precision = 0.5;
    fold.recall = 0.25;
    fold.f1 = 1.0 / 3.0;
    fold.roc_auc = 0.61;
    fold.n_rows = 100;
    r.per_fold = {fold, fold};
    r.mean = fold;
    r.mean.n_rows = 200;

    auto text = eval_report_json(r);
    CHECK(text.back() == '\n');
    auto j = nlohmann::json::parse(text);
    CHECK(j.at("family") == "logistic");
    CHECK(j.at("serve") == 2);
    CHECK(j.at("seed") == 99);
    CHECK(j.at("split") == "cv-10");
    CHECK(j.at("positive_class") == "returner");
    CHECK(j.at("per_fold").size() == 2);
    CHECK(j.at("per_fold")[0].at("accuracy").get<double>() == doctest::Approx(0.7));
    CHECK(j.at("mean").at("n_rows") == 200);
    CHECK(j.at("hyperparams").at("alpha").get<double>() == doctest::Approx(0.01));

    // undefined roc serializes as null
    r.mean.roc_defined = false;
    auto j2 = nlohmann::json::parse(eval_report_json(r));
    CHECK(j2.at("mean").at("roc_auc").is_null());

    // byte stability
    CHECK(eval_report_json(r) == eval_report_json(r));
}

TEST_CASE("eval summary TSV row formatting") {
    EvalReport r;
    r.family = "gbt";
    r.serve = 1;
    r.split = "test";
    r.mean.accuracy = 0.734;
    r.mean.precision = 0.5691;
    r.mean.recall = 0.25;
    r.mean.f1 = 0.2;
    r.mean.roc_auc = 0.57;
    r.mean.n_rows = 555;
    CHECK(eval_summary_header() ==
          "family\tserve\tsplit\tn_rows\taccuracy\tprecision\trecall\tf1\troc_auc");
    CHECK(eval_summary_row(r) ==
          "gbt\t1\ttest\t555\t0.7340\t0.5691\t0.2500\t0.2000\t0.5700");
    r.mean.roc_defined = false;
    auto row = eval_summary_row(r);
    CHECK(row.substr(row.size() - 2) == "\t-");
}

// ---------------------------------------------------------------- fitting

TEST_CASE("fit_model_spec wires schema, defaults, and training ids") {
    auto bench = make_bench(20, 2101, /*serve=*/1);
    ModelSpec spec;
    spec.family = Family::Baseline;
    spec.seed = 7;
    auto model = fit_model_spec(spec, bench.rows);

    CHECK(model.family == Family::Baseline);
    CHECK(model.seed == 7);
    CHECK(model.serve == 1);  // all rows share serve one
    CHECK(model.hyperparams.values == models::default_hyperparams(Family::Baseline).values);
    CHECK(std::is_sorted(model.training_match_ids.begin(), model.training_match_ids.end()));
    std::set<std::string> expect(bench.ids.begin(), bench.ids.end());
    std::set<std::string> got(model.training_match_ids.begin(), model.training_match_ids.end());
    CHECK(got == expect);
    CHECK(model.training_match_ids.size() == expect.size());  // deduplicated

    // the baseline probability equals the label rate of the fit rows
    double rate = 0.0;
    for (const auto& r : bench.rows) rate += r.label;
    rate /= static_cast<double>(bench.rows.size());
    const auto& prior = std::get<models::BaselineModel>(model.model);
    CHECK(prior.p == doctest::Approx(rate));

    // mixed serves collapse to zero
    auto mixed = make_bench(20, 2101, /*serve=*/0);
    auto model2 = fit_model_spec(spec, mixed.rows);
    CHECK(model2.serve == 0);

    ModelSpec bad = spec;
    bad.family = Family::Logistic;
    bad.hyperparams = models::default_hyperparams(Family::Logistic);
    bad.hyperparams.values["alpha"] = 1e9;
    CHECK_THROWS_AS(fit_model_spec(bad, bench.rows), std::out_of_range);
}

TEST_CASE("evaluate_rows guards against training-set leakage") {
    auto bench = make_bench(20, 31415, /*serve=*/1);
    auto test_set = bench.plan.test_ids;
    std::set<std::string> test_ids(test_set.begin(), test_set.end());
    auto train_rows = featureset::filter_by_match_ids(bench.rows, bench.plan.train_and_validation());
    auto test_rows = featureset::filter_by_match_ids(bench.rows, test_ids);
    REQUIRE(!train_rows.empty());
    REQUIRE(!test_rows.empty());

    ModelSpec spec;
    spec.family = Family::Baseline;
    auto model = fit_model_spec(spec, train_rows);

    auto held_out = evaluate_rows(model, test_rows, /*guard_leakage=*/true);
    CHECK(held_out.n_rows == test_rows.size());

    CHECK_THROWS_AS(evaluate_rows(model, train_rows, /*guard_leakage=*/true), LeakageDetected);
    CHECK_NOTHROW(evaluate_rows(model, train_rows, /*guard_leakage=*/false));

    // one leaked row among clean ones is enough
    auto mixed = test_rows;
    mixed.push_back(train_rows.front());
    CHECK_THROWS_AS(evaluate_rows(model, mixed, /*guard_leakage=*/true), LeakageDetected);
}

// ---------------------------------------------------------------- cross-validation

TEST_CASE("cross_validate runs ten leakage-clean folds and averages them") {
    auto bench = make_bench(24, 606, /*serve=*/1);
    ModelSpec spec;
    spec.family = Family::Baseline;
    spec.seed = 17;
    auto report = cross_validate(spec, bench.rows, bench.plan);

    CHECK(report.split == "cv-10");
    CHECK(report.family == "baseline");
    CHECK(report.seed == 17);
    REQUIRE(report.per_fold.size() == 10);  // 20+ pool matches fill every fold

    double acc = 0.0, f1 = 0.0;
    std::size_t rows_total = 0;
    for (const auto& f : report.per_fold) {
        acc += f.accuracy;
        f1 += f.f1;
        rows_total += f.n_rows;
    }
    CHECK(report.mean.accuracy == doctest::Approx(acc / 10.0).epsilon(1e-12));
    CHECK(report.mean.f1 == doctest::Approx(f1 / 10.0).epsilon(1e-12));
    CHECK(report.mean.n_rows == rows_total);

    // every pool row is evaluated exactly once across the folds
    std::size_t pool_rows = 0;
    auto pool = bench.plan.train_and_validation();
    for (const auto& r : bench.rows) pool_rows += pool.count(r.match_id);
    CHECK(rows_total == pool_rows);

    // determinism, down to the serialized report
    auto again = cross_validate(spec, bench.rows, bench.plan);
    CHECK(eval_report_json(again) == eval_report_json(report));
}

TEST_CASE("single-class folds are excluded from the auc mean with a warning") {
    auto bench = make_bench(20, 7007, /*serve=*/1);
    for (auto& r : bench.rows) r.label = 1;  // degenerate outcome everywhere

    ts::WarnCapture warns;
    ModelSpec spec;
    spec.family = Family::Baseline;
    auto report = cross_validate(spec, bench.rows, bench.plan);
    CHECK(!report.mean.roc_defined);
    for (const auto& f : report.per_fold) CHECK(!f.roc_defined);
    CHECK(warns.any_contains("holds a single class"));
    CHECK(report.mean.accuracy == doctest::Approx(1.0));  // baseline predicts p=1 >= 0.5
}

TEST_CASE("cross_validate also drives the logistic family end to end") {
    auto bench = make_bench(20, 4242, /*serve=*/1);
    ModelSpec spec;
    spec.family = Family::Logistic;
    spec.hyperparams = models::default_hyperparams(Family::Logistic);
    spec.hyperparams.values["epochs"] = 5;  // keep the suite quick
    spec.seed = 3;
    auto report = cross_validate(spec, bench.rows, bench.plan);
    REQUIRE(report.per_fold.size() == 10);
    CHECK(report.mean.accuracy > 0.5);  // serves dominate; must beat a coin
    CHECK(report.mean.roc_defined);
    CHECK(report.mean.roc_auc > 0.0);
    CHECK(report.family == "logistic");
}

// ---------------------------------------------------------------- search

TEST_CASE("default search spaces stay inside the declared ranges") {
    for (Family f : {Family::Baseline, Family::Logistic, Family::Forest, Family::AdaBoost,
                     Family::Gbt}) {
        auto space = default_search_space(f);
        auto hp = models::default_hyperparams(f);
        for (const auto& [name, dist] : space.dists) {
            REQUIRE(hp.ranges.count(name) == 1);
            auto push = [&](double v) {
                auto probe = models::default_hyperparams(f);
                probe.values[name] = v;
                CHECK_NOTHROW(probe.validate());
            };
            if (dist.kind == ParamDist::Kind::Categorical)
                for (double c : dist.choices) push(c);
            else {
                push(dist.lo);
                push(dist.hi);
            }
        }
    }
    CHECK(default_search_space(Family::Baseline).dists.empty());
    CHECK(default_search_space(Family::Gbt).dists.count("eta") == 1);
}

TEST_CASE("random_search scans the budget and picks the argmax trial") {
    auto bench = make_bench(20, 5151, /*serve=*/1);

    SearchSpace space;
    space.budget = 5;
    space.seed = 99;
    space.dists["alpha"] = {ParamDist::Kind::LogUniform, 0.005, 0.05, {}};
    space.dists["epochs"] = {ParamDist::Kind::IntUniform, 5, 8, {}};

    auto result = random_search(space, Family::Logistic, bench.rows, bench.plan, 17);
    REQUIRE(result.trials.size() == 5);

    for (const auto& t : result.trials) {
        const double alpha = t.params.at("alpha");
        const double epochs = t.params.at("epochs");
        CHECK(alpha >= 0.005);
        CHECK(alpha <= 0.05);
        CHECK(epochs >= 5.0);
        CHECK(epochs <= 8.0);
        CHECK(epochs == std::floor(epochs));
        // drawn values land on top of the family defaults
        CHECK(t.params.values.count("alpha") == 1);
        CHECK(t.params.ranges.count("alpha") == 1);
    }

    // re-derive the winner with the published selection rule
    int want = 0;
    auto key = [&](int i) {
        const auto& m = result.trials[static_cast<std::size_t>(i)].report.mean;
        return std::pair<double, double>(m.roc_defined ? m.roc_auc : -1.0, m.f1);
    };
    for (int i = 1; i < 5; ++i)
        if (key(i) > key(want)) want = i;
    CHECK(result.best_index == want);
    CHECK(result.best.values == result.trials[static_cast<std::size_t>(want)].params.values);
    CHECK(result.best_report.mean.accuracy ==
          result.trials[static_cast<std::size_t>(want)].report.mean.accuracy);

    // determinism across repeat runs
    auto rerun = random_search(space, Family::Logistic, bench.rows, bench.plan, 17);
    CHECK(rerun.best_index == result.best_index);
    REQUIRE(rerun.trials.size() == result.trials.size());
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
        CHECK(rerun.trials[i].params.values == result.trials[i].params.values);
        CHECK(rerun.trials[i].report.mean.roc_auc == result.trials[i].report.mean.roc_auc);
    }

    SearchSpace empty_budget = space;
    empty_budget.budget = 0;
    CHECK_THROWS_AS(random_search(empty_budget, Family::Logistic, bench.rows, bench.plan, 17),
                    std::invalid_argument);
}

TEST_CASE("trial log format") {
    auto bench = make_bench(20, 717, /*serve=*/2);
    SearchSpace space;
    space.budget = 3;
    space.seed = 4;
    space.dists["alpha"] = {ParamDist::Kind::Uniform, 0.01, 0.02, {}};
    space.dists["epochs"] = {ParamDist::Kind::IntUniform, 5, 6, {}};
    auto result = random_search(space, Family::Logistic, bench.rows, bench.plan, 1);

    std::ostringstream out;
    write_trial_log(out, result);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# slampoint trial log v1");
    std::getline(in, line);
    CHECK(line == "# trials=3 best=" + std::to_string(result.best_index));
    std::getline(in, line);
    CHECK(line == "trial\troc_auc\tf1\taccuracy\tprecision\trecall\tparams");
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.find("alpha=") != std::string::npos);
        CHECK(line.find(";epochs=") != std::string::npos);
    }
    CHECK(rows == 3);
}

// ---------------------------------------------------------------- model files

TEST_CASE("every family round-trips through the model file format") {
    auto bench = make_bench(20, 8888, /*serve=*/1);
    // a light subset keeps the heavier families quick
    std::vector<PreparedRow> rows(bench.rows.begin(),
                                  bench.rows.begin() + std::min<std::size_t>(400, bench.rows.size()));

    for (Family f : {Family::Baseline, Family::Logistic, Family::Forest, Family::AdaBoost,
                     Family::Gbt}) {
        ModelSpec spec;
        spec.family = f;
        spec.seed = 5;
        spec.hyperparams = models::default_hyperparams(f);
        switch (f) {
            case Family::Logistic: spec.hyperparams.values["epochs"] = 5; break;
            case Family::Forest:
                spec.hyperparams.values["n_trees"] = 10;
                spec.hyperparams.values["max_depth"] = 4;
                break;
            case Family::AdaBoost:
                spec.hyperparams.values["rounds"] = 10;
                break;
            case Family::Gbt:
                spec.hyperparams.values["rounds"] = 10;
                spec.hyperparams.values["max_depth"] = 3;
                break;
            default: break;
        }
        auto model = fit_model_spec(spec, rows);

        INFO("family ", models::family_name(f));
        auto text = models::serialize_model(model);
        auto back = models::deserialize_model(text);
        CHECK(models::family_name(back.family) == models::family_name(f));
        CHECK(back.schema.fingerprint() == model.schema.fingerprint());
        CHECK(back.training_match_ids == model.training_match_ids);
        CHECK(back.seed == model.seed);

        auto m = featureset::transform(rows, model.schema);
        auto p1 = models::predict_proba(model, m.x);
        auto p2 = models::predict_proba(back, m.x);
        CHECK(p1 == p2);

        CHECK(models::serialize_model(back) == text);  // byte-stable reserialization
    }
}

TEST_CASE("model files tolerate extra keys but reject tampering") {
    auto bench = make_bench(20, 1212, /*serve=*/1);
    std::vector<PreparedRow> rows(bench.rows.begin(), bench.rows.begin() + 200);
    ModelSpec spec;
    spec.family = Family::Baseline;
    auto model = fit_model_spec(spec, rows);
    auto text = models::serialize_model(model);

    // extra top-level keys (artifact stamps) are fine
    auto j = nlohmann::json::parse(text);
    j["stamp"] = {{"config", "deadbeef"}, {"seed", 17}};
    auto stamped = models::deserialize_model(j.dump(1) + "\n");
    CHECK(stamped.schema.fingerprint() == model.schema.fingerprint());

    // wrong magic, wrong version, corrupted schema
    auto bad_format = nlohmann::json::parse(text);
    bad_format["format"] = "something-else";
    CHECK_THROWS_WITH_AS(models::deserialize_model(bad_format.dump()), "not a slampoint model file",
                         std::runtime_error);

    auto bad_version = nlohmann::json::parse(text);
    bad_version["version"] = 2;
    CHECK_THROWS_WITH_AS(models::deserialize_model(bad_version.dump()),
                         "unsupported model file version", std::runtime_error);

    auto bad_schema = nlohmann::json::parse(text);
    std::string schema_text = bad_schema["schema_text"].get<std::string>();
    auto pos = schema_text.find("SetNo");
    REQUIRE(pos != std::string::npos);
    schema_text.replace(pos, 5, "SetXX");
    bad_schema["schema_text"] = schema_text;
    CHECK_THROWS_WITH_AS(models::deserialize_model(bad_schema.dump()),
                         "schema fingerprint mismatch in model file", std::runtime_error);
}

TEST_CASE("predict_proba rejects rows of the wrong width") {
    auto bench = make_bench(20, 3131, /*serve=*/1);
    std::vector<PreparedRow> rows(bench.rows.begin(), bench.rows.begin() + 100);
    ModelSpec spec;
    spec.family = Family::Baseline;
    auto model = fit_model_spec(spec, rows);
    models::Matrix bad = {{1.0, 2.0}};
    CHECK_THROWS_AS(models::predict_proba(model, bad), models::SchemaMismatch);
}
