#include "slampoint/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "slampoint/analysis.hpp"
#include "slampoint/common.hpp"
#include "slampoint/eval.hpp"
#include "slampoint/featureset.hpp"
#include "slampoint/model_io.hpp"

namespace slampoint::pipeline {

namespace fs = std::filesystem;
using config::RunConfig;

// ---------------------------------------------------------------- paths

std::string dataset_path(const std::string& out_dir) { return out_dir + "/dataset.tsv"; }
std::string exclusions_path(const std::string& out_dir) { return out_dir + "/exclusions.log"; }

std::string prepared_path(const std::string& out_dir, int serve) {
    return out_dir + (serve == 1 ? "/prepared_first.tsv" : "/prepared_second.tsv");
}

std::string schema_path(const std::string& out_dir, int serve) {
    return out_dir + (serve == 1 ? "/schema_first.txt" : "/schema_second.txt");
}

std::string split_plan_path(const std::string& out_dir) { return out_dir + "/split_plan.txt"; }

namespace {

std::string model_tag(models::Family family, int serve) {
    return models::family_name(family) + "_serve" + std::to_string(serve);
}

}  // namespace

std::string model_path(const std::string& out_dir, models::Family family, int serve, bool tuned) {
    return out_dir + "/model_" + model_tag(family, serve) + (tuned ? "_tuned" : "") + ".json";
}

std::string cv_report_path(const std::string& out_dir, models::Family family, int serve,
                           bool tuned) {
    return out_dir + "/report_" + model_tag(family, serve) + (tuned ? "_tuned" : "") + "_cv.json";
}

std::string test_report_path(const std::string& out_dir, models::Family family, int serve) {
    return out_dir + "/report_" + model_tag(family, serve) + "_test.json";
}

std::string trials_path(const std::string& out_dir, models::Family family, int serve) {
    return out_dir + "/trials_" + model_tag(family, serve) + ".tsv";
}

std::string report_dir(const std::string& out_dir) { return out_dir + "/report"; }

// ---------------------------------------------------------------- config helpers

std::set<int> parse_years(const std::string& text) {
    std::set<int> years;
    for (const auto& piece : split(text, ',')) {
        const std::string t = trim(piece);
        if (t.empty()) continue;
        const auto dash = t.find('-', 1);  // allow a leading minus to fail naturally
        auto read_year = [&](const std::string& s) {
            char* end = nullptr;
            const long v = std::strtol(s.c_str(), &end, 10);
            if (end == s.c_str() || *end != '\0' || v < 1900 || v > 2100)
                throw UsageError("bad year '" + s + "' in years list '" + text + "'");
            return static_cast<int>(v);
        };
        if (dash == std::string::npos) {
            years.insert(read_year(t));
        } else {
            const int lo = read_year(trim(t.substr(0, dash)));
            const int hi = read_year(trim(t.substr(dash + 1)));
            if (hi < lo) throw UsageError("year range '" + t + "' is reversed");
            for (int y = lo; y <= hi; ++y) years.insert(y);
        }
    }
    if (years.empty()) throw UsageError("empty years list '" + text + "'");
    return years;
}

std::set<ingest::Tournament> parse_tournaments(const std::string& text) {
    std::set<ingest::Tournament> out;
    for (const auto& piece : split(text, ',')) {
        const std::string t = trim(piece);
        if (t.empty()) continue;
        const auto tour = ingest::tournament_from_token(t);
        if (!tour) throw UsageError("unknown tournament token '" + t + "'");
        out.insert(*tour);
    }
    if (out.empty()) throw UsageError("empty tournaments list '" + text + "'");
    return out;
}

ingest::Scope scope_from_config(const RunConfig& cfg) {
    ingest::Scope scope;
    scope.tournaments = parse_tournaments(cfg.get("tournaments", "wimbledon,usopen"));
    scope.years = parse_years(cfg.get("years", "2016-2020"));
    scope.mens_singles_only = cfg.get_int("mens_singles_only", 1) != 0;
    return scope;
}

ingest::ArtifactStamp stamp_from_config(const RunConfig& cfg) {
    ingest::ArtifactStamp stamp;
    stamp.config_hash = hex64(cfg.hash());
    stamp.seed = cfg.get_u64("seed", 17);
    stamp.schema_version = "1";
    return stamp;
}

models::Family family_from_config(const RunConfig& cfg) {
    const std::string name = cfg.get("model", "gbt");
    try {
        return models::family_from_name(name);
    } catch (const std::invalid_argument&) {
        throw UsageError("unknown model family '" + name + "'");
    }
}

int serve_from_config(const RunConfig& cfg) {
    const long serve = cfg.get_int("serve", 1);
    if (serve != 1 && serve != 2) throw UsageError("serve must be 1 or 2");
    return static_cast<int>(serve);
}

models::Hyperparams hyperparams_from_config(const RunConfig& cfg, models::Family family) {
    models::Hyperparams hp = models::default_hyperparams(family);
    for (const auto& [key, value] : cfg.values) {
        if (key.rfind("hp.", 0) != 0) continue;
        const std::string name = key.substr(3);
        if (!hp.values.count(name))
            throw UsageError("hyperparameter '" + name + "' does not apply to family '" +
                             models::family_name(family) + "'");
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0')
            throw UsageError("hyperparameter '" + name + "' is not numeric: '" + value + "'");
        hp.values[name] = v;
    }
    try {
        hp.validate();
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
    return hp;
}

// ---------------------------------------------------------------- shared helpers

namespace {

std::string stamp_comment(const ingest::ArtifactStamp& stamp, bool with_seed = true) {
    std::string line = "# stamp config=" + stamp.config_hash;
    if (with_seed) line += " seed=" + std::to_string(stamp.seed);
    return line + " schema=" + stamp.schema_version + "\n";
}

std::string xml_stamp(const ingest::ArtifactStamp& stamp) {
    return "<!-- stamp config=" + stamp.config_hash + " seed=" + std::to_string(stamp.seed) +
           " schema=" + stamp.schema_version + " -->\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir + "': " + ec.message());
}

void require_file(const std::string& path, const std::string& hint) {
    if (!fs::exists(path)) throw UsageError("missing '" + path + "'; " + hint);
}

std::string out_dir_of(const RunConfig& cfg) { return cfg.get("out", "out"); }

// Adds the stamp object to a JSON artifact produced elsewhere.
std::string stamp_json(const std::string& text, const ingest::ArtifactStamp& stamp) {
    nlohmann::json j = nlohmann::json::parse(text);
    j["stamp"] = {{"config", stamp.config_hash},
                  {"seed", stamp.seed},
                  {"schema_version", stamp.schema_version}};
    return j.dump(1) + "\n";
}

std::vector<featureset::PreparedRow> load_prepared_file(const std::string& out_dir, int serve) {
    const std::string path = prepared_path(out_dir, serve);
    require_file(path, "run `slampoint prepare` first");
    std::ifstream in(path, std::ios::binary);
    return featureset::load_prepared(in);
}

featureset::SplitPlan load_plan_file(const std::string& out_dir) {
    const std::string path = split_plan_path(out_dir);
    require_file(path, "run `slampoint prepare` first");
    std::ifstream in(path, std::ios::binary);
    return featureset::load_split_plan(in);
}

ingest::MergedDataset load_dataset_file(const std::string& out_dir) {
    const std::string path = dataset_path(out_dir);
    require_file(path, "run `slampoint ingest` first");
    std::ifstream in(path, std::ios::binary);
    return ingest::load_dataset(in);
}

void print_metric_line(std::ostream& out, const std::string& label, const eval::MetricSet& m) {
    out << label << ": accuracy " << fmt_double(m.accuracy, 4) << ", precision "
        << fmt_double(m.precision, 4) << ", recall " << fmt_double(m.recall, 4) << ", f1 "
        << fmt_double(m.f1, 4) << ", roc_auc "
        << (m.roc_defined ? fmt_double(m.roc_auc, 4) : std::string("-")) << " (n="
        << m.n_rows << ")\n";
}

// Recognizes `<year>-<slam>-...` raw file names so out-of-scope files can be
// skipped without parsing them. Unrecognized names are kept conservatively.
bool file_in_scope(const std::string& stem, const ingest::Scope& scope) {
    const auto parts = split(stem, '-');
    if (parts.size() < 2) return true;
    char* end = nullptr;
    const long year = std::strtol(parts[0].c_str(), &end, 10);
    if (end == parts[0].c_str() || *end != '\0') return true;
    const auto tour = ingest::tournament_from_token(parts[1]);
    if (!tour) return true;
    return scope.years.count(static_cast<int>(year)) != 0 && scope.tournaments.count(*tour) != 0;
}

}  // namespace

// ---------------------------------------------------------------- ingest

void cmd_ingest(const RunConfig& cfg, std::ostream& out) {
    const std::string data_dir = cfg.get("data_dir", "");
    if (data_dir.empty())
        throw UsageError("no data directory; set data_dir=, --data-dir, or SLAMPOINT_DATA_DIR");
    if (!fs::is_directory(data_dir)) throw UsageError("data directory '" + data_dir + "' not found");

    const ingest::Scope scope = scope_from_config(cfg);

    std::vector<std::string> point_files, match_files, ranking_files, player_files;
    for (const auto& entry : fs::directory_iterator(data_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
        const std::string stem = name.substr(0, name.size() - 4);
        if (stem.size() > 7 && stem.substr(stem.size() - 7) == "-points") {
            if (file_in_scope(stem, scope)) point_files.push_back(entry.path().string());
        } else if (stem.size() > 8 && stem.substr(stem.size() - 8) == "-matches") {
            if (file_in_scope(stem, scope)) match_files.push_back(entry.path().string());
        } else if (stem.find("rankings") != std::string::npos) {
            ranking_files.push_back(entry.path().string());
        } else if (stem.find("players") != std::string::npos) {
            player_files.push_back(entry.path().string());
        }
    }
    std::sort(point_files.begin(), point_files.end());
    std::sort(match_files.begin(), match_files.end());
    std::sort(ranking_files.begin(), ranking_files.end());
    std::sort(player_files.begin(), player_files.end());
    if (point_files.empty())
        throw UsageError("no *-points.csv files in scope under '" + data_dir + "'");
    if (match_files.empty())
        throw UsageError("no *-matches.csv files in scope under '" + data_dir + "'");

    std::vector<ingest::RawPoint> points;
    for (const auto& path : point_files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot open '" + path + "'");
        auto part = ingest::parse_points_file(in);
        points.insert(points.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
    }
    std::vector<ingest::MatchMeta> matches;
    for (const auto& path : match_files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot open '" + path + "'");
        auto part = ingest::parse_matches_file(in);
        matches.insert(matches.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }

    std::vector<std::ifstream> ranking_streams;
    ranking_streams.reserve(ranking_files.size());
    std::vector<std::istream*> ranking_ptrs;
    for (const auto& path : ranking_files) {
        ranking_streams.emplace_back(path, std::ios::binary);
        if (!ranking_streams.back()) throw UsageError("cannot open '" + path + "'");
        ranking_ptrs.push_back(&ranking_streams.back());
    }
    std::ifstream players_stream;
    std::istream* players_ptr = nullptr;
    if (!player_files.empty()) {
        players_stream.open(player_files.front(), std::ios::binary);
        if (!players_stream) throw UsageError("cannot open '" + player_files.front() + "'");
        players_ptr = &players_stream;
    }
    const ingest::RankingTable rankings = ingest::parse_rankings(ranking_ptrs, players_ptr);

    const ingest::MergedDataset dataset =
        ingest::assemble_dataset(points, matches, rankings, scope);

    const std::string out_dir = out_dir_of(cfg);
    ensure_dir(out_dir);
    const ingest::ArtifactStamp stamp = stamp_from_config(cfg);
    {
        std::ostringstream os;
        ingest::write_dataset(os, dataset, stamp);
        write_text_file(dataset_path(out_dir), os.str());
    }
    {
        std::ostringstream os;
        os << stamp_comment(stamp);
        ingest::write_exclusions(os, dataset.exclusions);
        write_text_file(exclusions_path(out_dir), os.str());
    }

    out << "ingest: " << dataset.matches.size() << " matches, " << dataset.total_points()
        << " points (excluded " << dataset.exclusions.size() << " matches, dropped "
        << dataset.dropped_artifact_rows << " artifact rows)\n";
    out << "ingest: dataset -> " << dataset_path(out_dir) << "\n";
}

// ---------------------------------------------------------------- prepare

void cmd_prepare(const RunConfig& cfg, std::ostream& out) {
    const std::string out_dir = out_dir_of(cfg);
    const ingest::MergedDataset dataset = load_dataset_file(out_dir);
    const ingest::ArtifactStamp stamp = stamp_from_config(cfg);

    const std::vector<featureset::PreparedRow> rows = featureset::prepare_dataset(dataset);
    const auto [first_rows, second_rows] = featureset::split_by_serve(rows);

    std::vector<std::string> match_ids;
    match_ids.reserve(dataset.matches.size());
    for (const auto& m : dataset.matches) match_ids.push_back(m.meta.match_id);
    const featureset::SplitPlan plan = featureset::make_split_plan(match_ids, stamp.seed);
    const std::set<std::string> fit_ids = plan.train_and_validation();

    ensure_dir(out_dir);
    for (int serve = 1; serve <= 2; ++serve) {
        const auto& subset = serve == 1 ? first_rows : second_rows;
        std::ostringstream os;
        featureset::write_prepared(os, subset, stamp);
        write_text_file(prepared_path(out_dir, serve), os.str());

        // documentation sidecar: standardization fitted on the train+validation side
        const auto fit_rows = featureset::filter_by_match_ids(subset, fit_ids);
        const featureset::FeatureSchema schema = featureset::fit_schema(fit_rows);
        write_text_file(schema_path(out_dir, serve), stamp_comment(stamp) + schema.to_text());
    }
    {
        std::ostringstream os;
        os << stamp_comment(stamp, /*with_seed=*/false);  // plan records its own seed
        featureset::write_split_plan(os, plan);
        write_text_file(split_plan_path(out_dir), os.str());
    }

    auto prior = [](const std::vector<featureset::PreparedRow>& subset) {
        if (subset.empty()) return 0.0;
        std::size_t won = 0;
        for (const auto& r : subset) won += r.label == 1;
        return static_cast<double>(won) / static_cast<double>(subset.size());
    };
    out << "prepare: " << rows.size() << " rows (first " << first_rows.size() << ", second "
        << second_rows.size() << ")\n";
    out << "prepare: label prior first " << fmt_double(prior(first_rows), 4) << ", second "
        << fmt_double(prior(second_rows), 4) << "\n";
    out << "prepare: split " << plan.train_ids.size() << " train / "
        << plan.validation_ids.size() << " validation / " << plan.test_ids.size() << " test\n";
}

// ---------------------------------------------------------------- train

void cmd_train(const RunConfig& cfg, std::ostream& out) {
    const std::string out_dir = out_dir_of(cfg);
    const models::Family family = family_from_config(cfg);
    const int serve = serve_from_config(cfg);
    const ingest::ArtifactStamp stamp = stamp_from_config(cfg);

    const auto rows = load_prepared_file(out_dir, serve);
    const auto plan = load_plan_file(out_dir);

    eval::ModelSpec spec;
    spec.family = family;
    spec.hyperparams = hyperparams_from_config(cfg, family);
    spec.seed = stamp.seed;

    eval::EvalReport stamped = eval::cross_validate(spec, rows, plan);
    stamped.serve = serve;
    write_text_file(cv_report_path(out_dir, family, serve, /*tuned=*/false),
                    stamp_json(eval::eval_report_json(stamped), stamp));

    const auto fit_rows = featureset::filter_by_match_ids(rows, plan.train_and_validation());
    models::TrainedModel model = eval::fit_model_spec(spec, fit_rows);
    model.serve = serve;
    write_text_file(model_path(out_dir, family, serve, /*tuned=*/false),
                    stamp_json(models::serialize_model(model), stamp));

    out << "train: " << models::family_name(family) << ", serve " << serve << ", "
        << stamped.split << " over " << stamped.per_fold.size() << " folds\n";
    print_metric_line(out, "train: cv mean", stamped.mean);
    out << "train: model -> " << model_path(out_dir, family, serve, false) << "\n";
}

// ---------------------------------------------------------------- tune

void cmd_tune(const RunConfig& cfg, std::ostream& out) {
    const std::string out_dir = out_dir_of(cfg);
    const models::Family family = family_from_config(cfg);
    const int serve = serve_from_config(cfg);
    const ingest::ArtifactStamp stamp = stamp_from_config(cfg);
    const long budget = cfg.get_int("budget", 20);
    if (budget < 1) throw UsageError("tuning budget must be >= 1");

    const auto rows = load_prepared_file(out_dir, serve);
    const auto plan = load_plan_file(out_dir);

    eval::SearchSpace space = eval::default_search_space(family);
    space.budget = static_cast<int>(budget);
    space.seed = stamp.seed;

    const eval::SearchResult result = eval::random_search(space, family, rows, plan, stamp.seed);

    {
        std::ostringstream os;
        os << stamp_comment(stamp);
        eval::write_trial_log(os, result);
        write_text_file(trials_path(out_dir, family, serve), os.str());
    }
    eval::EvalReport best = result.best_report;
    best.serve = serve;
    write_text_file(cv_report_path(out_dir, family, serve, /*tuned=*/true),
                    stamp_json(eval::eval_report_json(best), stamp));

    eval::ModelSpec spec;
    spec.family = family;
    spec.hyperparams = result.best;
    spec.seed = stamp.seed;
    const auto fit_rows = featureset::filter_by_match_ids(rows, plan.train_and_validation());
    models::TrainedModel model = eval::fit_model_spec(spec, fit_rows);
    model.serve = serve;
    write_text_file(model_path(out_dir, family, serve, /*tuned=*/true),
                    stamp_json(models::serialize_model(model), stamp));

    out << "tune: " << models::family_name(family) << ", serve " << serve << ", "
        << result.trials.size() << " trials, best trial " << result.best_index << "\n";
    std::vector<std::string> kv;
    for (const auto& [name, value] : result.best.values)
        kv.push_back(name + "=" + fmt_double_exact(value));
    out << "tune: best params " << join(kv.begin(), kv.end(), " ") << "\n";
    print_metric_line(out, "tune: best cv mean", best.mean);
    out << "tune: model -> " << model_path(out_dir, family, serve, true) << "\n";
}

// ---------------------------------------------------------------- evaluate

void cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
    const std::string out_dir = out_dir_of(cfg);
    const models::Family family = family_from_config(cfg);
    const int serve = serve_from_config(cfg);
    const ingest::ArtifactStamp stamp = stamp_from_config(cfg);

    std::string path = cfg.get("model_file", "");
    if (path.empty()) {
        const std::string tuned = model_path(out_dir, family, serve, true);
        const std::string plain = model_path(out_dir, family, serve, false);
        if (fs::exists(tuned))
            path = tuned;
        else if (fs::exists(plain))
            path = plain;
        else
            throw UsageError("no model file at '" + tuned + "' or '" + plain +
                             "'; run `slampoint train` or `slampoint tune`, or pass --model-file");
    }
    require_file(path, "pass --model-file or run train/tune first");
    const models::TrainedModel model = models::deserialize_model(read_text_file(path));

    const auto rows = load_prepared_file(out_dir, model.serve == 0 ? serve : model.serve);
    const auto plan = load_plan_file(out_dir);
    const std::set<std::string> test_ids(plan.test_ids.begin(), plan.test_ids.end());
    const auto test_rows = featureset::filter_by_match_ids(rows, test_ids);
    if (test_rows.empty()) throw UsageError("test split holds no rows for this serve subset");

    // guard_leakage: a test match recorded among the model's training
    // matches is a hard failure, never silently scored.
    const eval::MetricSet m = eval::evaluate_rows(model, test_rows, /*guard_leakage=*/true);

    eval::EvalReport report;
    report.family = models::family_name(model.family);
    report.serve = model.serve == 0 ? serve : model.serve;
    report.seed = model.seed;
    report.split = "test";
    report.hyperparams = model.hyperparams;
    report.mean = m;
    write_text_file(test_report_path(out_dir, model.family, report.serve),
                    stamp_json(eval::eval_report_json(report), stamp));

    out << "evaluate: " << report.family << ", serve " << report.serve << ", "
        << test_ids.size() << " held-out matches\n";
    print_metric_line(out, "evaluate: test", m);
    out << "evaluate: report -> " << test_report_path(out_dir, model.family, report.serve)
        << "\n";
}

// ---------------------------------------------------------------- report

void cmd_report(const RunConfig& cfg, std::ostream& out) {
    const std::string out_dir = out_dir_of(cfg);
    const ingest::MergedDataset dataset = load_dataset_file(out_dir);
    const ingest::ArtifactStamp stamp = stamp_from_config(cfg);
    const double threshold = cfg.get_double("importance_threshold", 0.01);

    const std::string dir = report_dir(out_dir);
    ensure_dir(dir);

    std::ostringstream index;
    index << "# slampoint report bundle\n\n";
    index << "- config: " << stamp.config_hash << "\n";
    index << "- seed: " << stamp.seed << "\n";
    index << "- schema version: " << stamp.schema_version << "\n";
    index << "- matches: " << dataset.matches.size() << "\n";
    index << "- points: " << dataset.total_points() << "\n";

    // ---- win rates
    const analysis::WinRateSummary rates = analysis::win_rate_summary(dataset.matches);
    write_text_file(dir + "/win_rates.tsv", stamp_comment(stamp) + analysis::win_rate_table(rates));
    index << "\n## win rates ([win_rates.tsv](win_rates.tsv))\n\n";
    index << "- first serve: " << fmt_double(100.0 * rates.p_first, 1) << "% of "
          << rates.n_first << " points\n";
    index << "- second serve: " << fmt_double(100.0 * rates.p_second, 1) << "% of "
          << rates.n_second << " points\n";
    index << "- overall: " << fmt_double(100.0 * rates.p_overall, 1) << "%\n";
    out << "report: win rates first " << fmt_double(rates.p_first, 4) << ", second "
        << fmt_double(rates.p_second, 4) << ", overall " << fmt_double(rates.p_overall, 4)
        << "\n";

    // ---- placement heatmaps
    index << "\n## serve placement\n\n";
    for (int serve = 1; serve <= 2; ++serve) {
        for (const analysis::Court court : {analysis::Court::Deuce, analysis::Court::Ad}) {
            const std::string name =
                "heatmap_serve" + std::to_string(serve) + "_" + analysis::court_name(court);
            try {
                const analysis::PlacementGrid grid =
                    analysis::placement_grid(dataset.matches, serve, court);
                write_text_file(dir + "/" + name + ".svg",
                                xml_stamp(stamp) + analysis::render_court_heatmap(grid));
                index << "- serve " << serve << ", " << analysis::court_name(court)
                      << " court: wide-line share " << fmt_double(grid.wide_line_share(), 2)
                      << "% of " << grid.n_serves << " successful serves ([" << name << ".svg]("
                      << name << ".svg))\n";
                out << "report: " << name << " wide-line share "
                    << fmt_double(grid.wide_line_share(), 2) << "%\n";
            } catch (const analysis::EmptySelection&) {
                index << "- serve " << serve << ", " << analysis::court_name(court)
                      << " court: no successful serves with placement; heatmap skipped\n";
                out << "report: " << name << " skipped (no placement rows)\n";
            }
        }
    }

    // ---- importance (needs a fitted boosted-tree model)
    index << "\n## feature importance\n\n";
    std::string model_file = cfg.get("model_file", "");
    if (model_file.empty()) {
        for (int serve : {1, 2}) {
            for (bool tuned : {true, false}) {
                const std::string candidate =
                    model_path(out_dir, models::Family::Gbt, serve, tuned);
                if (fs::exists(candidate)) {
                    model_file = candidate;
                    break;
                }
            }
            if (!model_file.empty()) break;
        }
    }
    if (model_file.empty() || !fs::exists(model_file)) {
        const std::string notice =
            "no fitted gbt model found; importance chart skipped (train or tune one first)";
        index << "- " << notice << "\n";
        out << "report: " << notice << "\n";
    } else {
        const models::TrainedModel model = models::deserialize_model(read_text_file(model_file));
        if (model.family != models::Family::Gbt) {
            const std::string notice = "model '" + model_file +
                                       "' is not a gbt model; importance chart skipped";
            index << "- " << notice << "\n";
            out << "report: " << notice << "\n";
        } else {
            std::map<std::string, double> named;
            try {
                const auto shares = models::importance_gain(std::get<models::GbtModel>(model.model));
                for (const auto& [feature, share] : shares)
                    named[model.schema.columns[static_cast<std::size_t>(feature)].name] = share;
            } catch (const models::NoSplits&) {
                // every tree is a stump root; an empty report carries the notice
            }
            const analysis::ImportanceReport imp = analysis::importance_report(named, threshold);
            write_text_file(dir + "/importance.tsv",
                            stamp_comment(stamp) + analysis::importance_table(imp));
            write_text_file(dir + "/importance.svg",
                            xml_stamp(stamp) + analysis::render_importance_chart(imp));
            index << "- model: " << model_file << "\n";
            index << "- " << imp.entries.size() << " features with gain share > "
                  << fmt_double_exact(threshold)
                  << " ([importance.tsv](importance.tsv), [importance.svg](importance.svg))\n";
            for (std::size_t i = 0; i < imp.entries.size() && i < 5; ++i)
                index << "  " << (i + 1) << ". " << imp.entries[i].feature << " ("
                      << fmt_double(100.0 * imp.entries[i].share, 2) << "%)\n";
            out << "report: importance lists " << imp.entries.size() << " features\n";
        }
    }

    write_text_file(dir + "/index.md", index.str());
    out << "report: bundle -> " << dir << "\n";
}

// ---------------------------------------------------------------- dispatch

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
    try {
        if (name == "ingest")
            cmd_ingest(cfg, out);
        else if (name == "prepare")
            cmd_prepare(cfg, out);
        else if (name == "train")
            cmd_train(cfg, out);
        else if (name == "tune")
            cmd_tune(cfg, out);
        else if (name == "evaluate")
            cmd_evaluate(cfg, out);
        else if (name == "report")
            cmd_report(cfg, out);
        else
            throw UsageError("unknown command '" + name + "'");
        return 0;
    } catch (const UsageError& e) {
        err << "slampoint " << name << ": " << e.what() << "\n";
        return 2;
    } catch (const config::BadConfig& e) {
        err << "slampoint " << name << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "slampoint " << name << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace slampoint::pipeline
