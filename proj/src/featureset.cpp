#include "slampoint/featureset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "slampoint/common.hpp"

namespace slampoint::featureset {

using ingest::kEventFlags;
using ingest::RawPoint;

// ---------------------------------------------------------------- columns

const std::vector<std::string>& numeric_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {
            "SetNo",        "GameNo",       "PointNumber",  "Tiebreak",
            "P1Score",      "P2Score",      "P1GamesWon",   "P2GamesWon",
            "P1SetsWon",    "P2SetsWon",    "P1PointsWon",  "P2PointsWon",
            "P1BreakPoint", "P2BreakPoint", "P1Rank",       "P2Rank",
            "P1NotRanked",  "P2NotRanked",
        };
        for (const auto& name : accumulated_columns()) c.push_back(name);
        return c;
    }();
    return cols;
}

const std::vector<std::string>& accumulated_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c;
        for (const auto& [stem, member] : kEventFlags) {
            (void)member;
            c.push_back(std::string("P1") + stem + "A");
            c.push_back(std::string("P2") + stem + "A");
        }
        auto add_group = [&](const char* stem, const std::vector<std::string>& cats) {
            for (const auto& cat : cats) {
                c.push_back(std::string("P1") + stem + cat + "A");
                c.push_back(std::string("P2") + stem + cat + "A");
            }
        };
        add_group("ServeWidth", ingest::serve_width_values());
        add_group("ServeDepth", ingest::serve_depth_values());
        add_group("ReturnDepth", ingest::return_depth_values());
        return c;
    }();
    return cols;
}

int score_ordinal(const std::string& token) {
    std::string t = trim(token);
    if (t == "0") return 0;
    if (t == "15") return 1;
    if (t == "30") return 2;
    if (t == "40") return 3;
    if (t == "AD" || t == "A") return 4;
    throw std::runtime_error("unrecognized score token '" + token + "'");
}

bool is_tiebreak_game(ingest::Tournament t, int year, int set_no, int games1, int games2) {
    if (games1 != games2) return false;
    const bool final_set = set_no >= 5;  // best-of-five play
    if (!final_set) return games1 == 6;
    switch (t) {
        case ingest::Tournament::UsOpen:
            return games1 == 6;  // final-set tiebreak since 1970
        case ingest::Tournament::Wimbledon:
            return year >= 2019 && games1 == 12;
        case ingest::Tournament::AustralianOpen:
            return year >= 2019 && games1 == 6;
        case ingest::Tournament::FrenchOpen:
            return false;  // advantage final sets throughout 2016-2020
    }
    return false;
}

// ---------------------------------------------------------------- accumulate

std::vector<std::vector<int>> accumulate(const std::vector<RawPoint>& points) {
    const std::size_t width = accumulated_columns().size();
    const std::size_t flag_base = 0;                      // 18 event-flag counters
    const std::size_t width_base = kEventFlags.size() * 2;  // serve width block
    const std::size_t depth_base = width_base + ingest::serve_width_values().size() * 2;
    const std::size_t return_base = depth_base + ingest::serve_depth_values().size() * 2;

    std::vector<int> counters(width, 0);
    std::vector<std::vector<int>> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(counters);  // strictly-before snapshot
        for (std::size_t f = 0; f < kEventFlags.size(); ++f) {
            counters[flag_base + 2 * f] += p.p1.*kEventFlags[f].second;
            counters[flag_base + 2 * f + 1] += p.p2.*kEventFlags[f].second;
        }
        if (p.point_server == 1 || p.point_server == 2) {
            const std::size_t srv = static_cast<std::size_t>(p.point_server - 1);
            const std::size_t ret = 1 - srv;
            if (p.serve_width) {
                const auto& cats = ingest::serve_width_values();
                auto it = std::find(cats.begin(), cats.end(), *p.serve_width);
                counters[width_base + 2 * static_cast<std::size_t>(it - cats.begin()) + srv] += 1;
            }
            if (p.serve_depth) {
                const auto& cats = ingest::serve_depth_values();
                auto it = std::find(cats.begin(), cats.end(), *p.serve_depth);
                counters[depth_base + 2 * static_cast<std::size_t>(it - cats.begin()) + srv] += 1;
            }
            if (p.return_depth) {
                const auto& cats = ingest::return_depth_values();
                auto it = std::find(cats.begin(), cats.end(), *p.return_depth);
                counters[return_base + 2 * static_cast<std::size_t>(it - cats.begin()) + ret] += 1;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- shift

namespace {

int parse_tiebreak_count(const std::string& token, const std::string& match_id) {
    std::string t = trim(token);
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end == t.c_str() || *end != '\0' || v < 0)
        throw std::runtime_error("match " + match_id + ": non-numeric tiebreak score '" + token +
                                 "'");
    return static_cast<int>(v);
}

}  // namespace

std::vector<StateRow> shift_outcomes(const std::vector<RawPoint>& points,
                                     const ingest::MatchMeta& meta) {
    std::vector<StateRow> out;
    out.reserve(points.size());
    int sets1 = 0, sets2 = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const RawPoint& cur = points[i];
        StateRow s;
        s.p1_sets = sets1;
        s.p2_sets = sets2;
        if (i > 0) {
            const RawPoint& prev = points[i - 1];
            s.p1_points = prev.p1_points_won;
            s.p2_points = prev.p2_points_won;
            const bool same_set = prev.set_no == cur.set_no;
            if (same_set) {
                s.p1_games = prev.p1_games_won;
                s.p2_games = prev.p2_games_won;
            }
            if (same_set && prev.game_no == cur.game_no) {
                s.tiebreak = is_tiebreak_game(meta.tournament, meta.year, cur.set_no, s.p1_games,
                                              s.p2_games)
                                 ? 1
                                 : 0;
                if (s.tiebreak) {
                    s.p1_score = parse_tiebreak_count(prev.p1_score, meta.match_id);
                    s.p2_score = parse_tiebreak_count(prev.p2_score, meta.match_id);
                } else {
                    s.p1_score = score_ordinal(prev.p1_score);
                    s.p2_score = score_ordinal(prev.p2_score);
                }
            } else {
                s.tiebreak = is_tiebreak_game(meta.tournament, meta.year, cur.set_no, s.p1_games,
                                              s.p2_games)
                                 ? 1
                                 : 0;
            }
        }
        out.push_back(s);
        if (cur.set_winner == 1) ++sets1;
        if (cur.set_winner == 2) ++sets2;
    }
    return out;
}

// ---------------------------------------------------------------- swap

std::vector<int> to_server_perspective(WideTable& table) {
    // discover P1*/P2* pairs by name
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < table.columns.size(); ++c) index[table.columns[c]] = c;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const std::string& name = table.columns[c];
        if (name.rfind("P1", 0) == 0) {
            auto it = index.find("P2" + name.substr(2));
            if (it == index.end()) throw UnpairedColumn(name);
            pairs.emplace_back(c, it->second);
        } else if (name.rfind("P2", 0) == 0) {
            if (!index.count("P1" + name.substr(2))) throw UnpairedColumn(name);
        }
    }

    std::vector<int> labels(table.rows.size(), 0);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const int server = table.point_server[r];
        labels[r] = table.point_winner[r] == server ? 1 : 0;
        if (server == 2)
            for (auto [a, b] : pairs) std::swap(table.rows[r][a], table.rows[r][b]);
        table.point_server[r] = 1;  // P1 now denotes the server
    }
    return labels;
}

// ---------------------------------------------------------------- prepare

std::vector<PreparedRow> prepare_match(const ingest::MatchRecord& match) {
    const auto& points = match.points;
    for (std::size_t i = 1; i < points.size(); ++i) {
        auto key = [](const RawPoint& p) {
            return std::tuple<int, int, int>(p.set_no, p.game_no, p.point_number);
        };
        if (!(key(points[i - 1]) < key(points[i]))) throw UnorderedPoints(match.meta.match_id);
    }

    const auto state = shift_outcomes(points, match.meta);
    const auto acc = accumulate(points);

    WideTable table;
    table.columns = numeric_columns();
    const std::size_t acc_offset = table.columns.size() - accumulated_columns().size();
    table.rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const RawPoint& p = points[i];
        const StateRow& s = state[i];
        std::vector<double> row(table.columns.size(), 0.0);
        row[0] = p.set_no;
        row[1] = p.game_no;
        row[2] = p.point_number;
        row[3] = s.tiebreak;
        row[4] = s.p1_score;
        row[5] = s.p2_score;
        row[6] = s.p1_games;
        row[7] = s.p2_games;
        row[8] = s.p1_sets;
        row[9] = s.p2_sets;
        row[10] = s.p1_points;
        row[11] = s.p2_points;
        row[12] = p.p1.break_point;
        row[13] = p.p2.break_point;
        row[14] = match.p1_rank;
        row[15] = match.p2_rank;
        row[16] = match.p1_not_ranked ? 1.0 : 0.0;
        row[17] = match.p2_not_ranked ? 1.0 : 0.0;
        for (std::size_t j = 0; j < acc[i].size(); ++j) row[acc_offset + j] = acc[i][j];
        table.rows.push_back(std::move(row));
        table.point_server.push_back(p.point_server);
        table.point_winner.push_back(p.point_winner);
    }

    const auto labels = to_server_perspective(table);

    std::vector<PreparedRow> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        PreparedRow r;
        r.match_id = match.meta.match_id;
        r.serve_number = points[i].serve_number;
        r.label = labels[i];
        r.surface = match.meta.surface;
        r.tournament = ingest::tournament_token(match.meta.tournament);
        r.numeric = std::move(table.rows[i]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PreparedRow> prepare_dataset(const ingest::MergedDataset& dataset) {
    std::vector<PreparedRow> out;
    for (const auto& match : dataset.matches) {
        auto rows = prepare_match(match);
        for (auto& r : rows) out.push_back(std::move(r));
    }
    return out;
}

std::pair<std::vector<PreparedRow>, std::vector<PreparedRow>> split_by_serve(
    const std::vector<PreparedRow>& rows) {
    std::pair<std::vector<PreparedRow>, std::vector<PreparedRow>> out;
    for (const auto& r : rows) (r.serve_number == 1 ? out.first : out.second).push_back(r);
    return out;
}

std::vector<PreparedRow> filter_by_match_ids(const std::vector<PreparedRow>& rows,
                                             const std::set<std::string>& ids) {
    std::vector<PreparedRow> out;
    for (const auto& r : rows)
        if (ids.count(r.match_id)) out.push_back(r);
    return out;
}

// ---------------------------------------------------------------- schema

std::uint64_t FeatureSchema::fingerprint() const {
    std::string repr;
    for (const auto& c : columns) {
        repr += c.name;
        repr += '|';
        repr += c.one_hot ? 'h' : 'n';
        repr += '|';
        repr += c.group;
        repr += '|';
        repr += c.category;
        repr += ';';
    }
    for (const auto& [group, cats] : dictionaries) {
        repr += group;
        repr += '=';
        repr += join(cats.begin(), cats.end(), ",");
        repr += ';';
    }
    return fnv1a64(repr);
}

FeatureSchema fit_schema(const std::vector<PreparedRow>& fit_rows) {
    if (fit_rows.empty()) throw std::invalid_argument("fit_schema: no rows");
    FeatureSchema schema;

    const auto& names = numeric_columns();
    const std::size_t d = names.size();
    std::vector<double> mean(d, 0.0), m2(d, 0.0);
    for (const auto& r : fit_rows)
        for (std::size_t c = 0; c < d; ++c) mean[c] += r.numeric[c];
    for (std::size_t c = 0; c < d; ++c) mean[c] /= static_cast<double>(fit_rows.size());
    for (const auto& r : fit_rows)
        for (std::size_t c = 0; c < d; ++c) {
            const double dv = r.numeric[c] - mean[c];
            m2[c] += dv * dv;
        }
    for (std::size_t c = 0; c < d; ++c) {
        SchemaColumn col;
        col.name = names[c];
        col.group = "-";
        col.category = "-";
        col.fitted = true;
        col.mean = mean[c];
        col.sd = std::sqrt(m2[c] / static_cast<double>(fit_rows.size()));
        schema.columns.push_back(std::move(col));
    }

    std::set<std::string> surfaces, tournaments;
    for (const auto& r : fit_rows) {
        surfaces.insert(r.surface);
        tournaments.insert(r.tournament);
    }
    schema.dictionaries["surface"] = {surfaces.begin(), surfaces.end()};
    schema.dictionaries["tournament"] = {tournaments.begin(), tournaments.end()};
    schema.dictionaries["ServeWidth"] = ingest::serve_width_values();
    schema.dictionaries["ServeDepth"] = ingest::serve_depth_values();
    schema.dictionaries["ReturnDepth"] = ingest::return_depth_values();

    for (const std::string group : {"surface", "tournament"}) {
        for (const auto& cat : schema.dictionaries[group]) {
            SchemaColumn col;
            col.name = group + "=" + cat;
            col.one_hot = true;
            col.group = group;
            col.category = cat;
            schema.columns.push_back(std::move(col));
        }
    }
    return schema;
}

std::string FeatureSchema::to_text() const {
    std::ostringstream os;
    os << "# feature schema v1\n";
    os << "# fingerprint=" << hex64(fingerprint()) << "\n";
    os << "# columns=" << columns.size() << "\n";
    for (const auto& [group, cats] : dictionaries)
        os << "# dictionary " << group << " " << join(cats.begin(), cats.end(), ",") << "\n";
    os << "name\tkind\tgroup\tcategory\tmean\tsd\n";
    for (const auto& c : columns) {
        os << c.name << "\t" << (c.one_hot ? "onehot" : "numeric") << "\t" << c.group << "\t"
           << c.category << "\t";
        if (c.fitted)
            os << fmt_double_exact(c.mean) << "\t" << fmt_double_exact(c.sd) << "\n";
        else
            os << "-\t-\n";
    }
    return os.str();
}

FeatureSchema FeatureSchema::from_text(const std::string& text) {
    FeatureSchema schema;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto parts = split(line, ' ');
            if (parts.size() >= 4 && parts[1] == "dictionary")
                schema.dictionaries[parts[2]] = split(parts[3], ',');
            continue;
        }
        auto fields = split(line, '\t');
        if (!header_seen) {
            header_seen = true;  // column header row
            continue;
        }
        if (fields.size() != 6) throw std::runtime_error("malformed schema line: " + line);
        SchemaColumn c;
        c.name = fields[0];
        c.one_hot = fields[1] == "onehot";
        c.group = fields[2];
        c.category = fields[3];
        if (fields[4] != "-") {
            c.fitted = true;
            c.mean = std::strtod(fields[4].c_str(), nullptr);
            c.sd = std::strtod(fields[5].c_str(), nullptr);
        }
        schema.columns.push_back(std::move(c));
    }
    return schema;
}

FeatureMatrix transform(const std::vector<PreparedRow>& rows, const FeatureSchema& schema) {
    std::map<std::string, std::size_t> numeric_index;
    for (std::size_t i = 0; i < numeric_columns().size(); ++i)
        numeric_index[numeric_columns()[i]] = i;

    // resolve each schema column to a source once
    struct Source {
        bool one_hot;
        std::size_t numeric_idx;  // when !one_hot
        bool from_surface;        // when one_hot: surface vs tournament
        std::string category;
        double mean, divisor;
    };
    std::vector<Source> sources;
    sources.reserve(schema.columns.size());
    for (const auto& c : schema.columns) {
        Source s{};
        s.one_hot = c.one_hot;
        if (c.one_hot) {
            if (c.group == "surface")
                s.from_surface = true;
            else if (c.group == "tournament")
                s.from_surface = false;
            else
                throw std::runtime_error("unknown one-hot group: " + c.group);
            s.category = c.category;
        } else {
            auto it = numeric_index.find(c.name);
            if (it == numeric_index.end())
                throw std::runtime_error("unknown numeric column in schema: " + c.name);
            s.numeric_idx = it->second;
            s.mean = c.fitted ? c.mean : 0.0;
            s.divisor = (c.fitted && c.sd != 0.0) ? c.sd : 1.0;
        }
        sources.push_back(std::move(s));
    }

    FeatureMatrix out;
    for (const auto& c : schema.columns) out.columns.push_back(c.name);
    out.x.reserve(rows.size());
    std::set<std::string> warned;
    for (const auto& r : rows) {
        // categories absent from the fitted dictionaries encode as all zeros
        for (const std::string group : {"surface", "tournament"}) {
            auto dict = schema.dictionaries.find(group);
            if (dict == schema.dictionaries.end()) continue;
            const std::string& value = group == std::string("surface") ? r.surface : r.tournament;
            if (std::find(dict->second.begin(), dict->second.end(), value) == dict->second.end() &&
                warned.insert(group + "=" + value).second)
                warn("unseen " + group + " category '" + value + "' encoded as all zeros");
        }
        std::vector<double> x(sources.size(), 0.0);
        for (std::size_t c = 0; c < sources.size(); ++c) {
            const Source& s = sources[c];
            if (s.one_hot) {
                const std::string& value = s.from_surface ? r.surface : r.tournament;
                x[c] = value == s.category ? 1.0 : 0.0;
            } else {
                x[c] = (r.numeric[s.numeric_idx] - s.mean) / s.divisor;
            }
        }
        out.x.push_back(std::move(x));
        out.y.push_back(r.label);
        out.match_id.push_back(r.match_id);
        out.serve_number.push_back(r.serve_number);
    }
    return out;
}

// ---------------------------------------------------------------- split plan

std::set<std::string> SplitPlan::train_and_validation() const {
    std::set<std::string> out(train_ids.begin(), train_ids.end());
    out.insert(validation_ids.begin(), validation_ids.end());
    return out;
}

namespace {

std::size_t round_half_up(double v) {
    return static_cast<std::size_t>(std::floor(v + 0.5));
}

}  // namespace

SplitPlan make_split_plan(const std::vector<std::string>& match_ids, std::uint64_t seed) {
    if (match_ids.size() < 20) throw TooFewMatches(match_ids.size());
    std::vector<std::string> ids(match_ids);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw std::invalid_argument("duplicate match id in split input");

    SplitPlan plan;
    plan.seed = seed;
    Rng rng = Rng::derive(seed, "split-plan");
    rng.shuffle(ids);

    const std::size_t n = ids.size();
    const std::size_t n_test = std::max<std::size_t>(1, round_half_up(0.10 * static_cast<double>(n)));
    const std::size_t remaining = n - n_test;
    const std::size_t n_val = round_half_up(0.20 * static_cast<double>(remaining));

    plan.test_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_test));
    plan.validation_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_test),
                               ids.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
    plan.train_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), ids.end());

    // balanced match-level folds over train+validation
    std::vector<std::string> pool;
    pool.insert(pool.end(), plan.train_ids.begin(), plan.train_ids.end());
    pool.insert(pool.end(), plan.validation_ids.begin(), plan.validation_ids.end());
    Rng fold_rng = Rng::derive(seed, "folds");
    fold_rng.shuffle(pool);
    for (std::size_t i = 0; i < pool.size(); ++i)
        plan.fold_of[pool[i]] = static_cast<int>(i % SplitPlan::kFolds);

    std::sort(plan.test_ids.begin(), plan.test_ids.end());
    std::sort(plan.train_ids.begin(), plan.train_ids.end());
    std::sort(plan.validation_ids.begin(), plan.validation_ids.end());
    return plan;
}

void write_split_plan(std::ostream& out, const SplitPlan& plan) {
    out << "# slampoint split plan v1\n";
    out << "# seed=" << plan.seed << "\n";
    out << "# test=" << plan.test_ids.size() << " train=" << plan.train_ids.size()
        << " validation=" << plan.validation_ids.size() << " folds=" << SplitPlan::kFolds << "\n";
    struct Line {
        std::string id, role, fold;
    };
    std::vector<Line> lines;
    for (const auto& id : plan.test_ids) lines.push_back({id, "test", "-"});
    for (const auto& id : plan.train_ids)
        lines.push_back({id, "train", std::to_string(plan.fold_of.at(id))});
    for (const auto& id : plan.validation_ids)
        lines.push_back({id, "validation", std::to_string(plan.fold_of.at(id))});
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
    for (const auto& l : lines) out << l.id << "\t" << l.role << "\t" << l.fold << "\n";
}

SplitPlan load_split_plan(std::istream& in) {
    SplitPlan plan;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("seed=");
            if (pos != std::string::npos && line.find("test=") == std::string::npos)
                plan.seed = std::strtoull(line.c_str() + pos + 5, nullptr, 10);
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 3) throw std::runtime_error("malformed split plan line: " + line);
        if (fields[1] == "test") {
            plan.test_ids.push_back(fields[0]);
        } else if (fields[1] == "train" || fields[1] == "validation") {
            (fields[1] == "train" ? plan.train_ids : plan.validation_ids).push_back(fields[0]);
            plan.fold_of[fields[0]] = std::atoi(fields[2].c_str());
        } else {
            throw std::runtime_error("unknown split role: " + fields[1]);
        }
    }
    return plan;
}

// ---------------------------------------------------------------- prepared file

void write_prepared(std::ostream& out, const std::vector<PreparedRow>& rows,
                    const ingest::ArtifactStamp& stamp) {
    out << "# slampoint prepared v" << stamp.schema_version << "\n";
    out << "# config=" << stamp.config_hash << " seed=" << stamp.seed << "\n";
    out << "# rows=" << rows.size() << "\n";
    csv::Table table;
    table.columns = {"match_id", "serve_number", "label", "surface", "tournament"};
    for (const auto& name : numeric_columns()) table.columns.push_back(name);
    for (const auto& r : rows) {
        std::vector<std::string> row = {r.match_id, std::to_string(r.serve_number),
                                        std::to_string(r.label), r.surface, r.tournament};
        for (double v : r.numeric) row.push_back(fmt_double_exact(v));
        table.rows.push_back(std::move(row));
    }
    write_table(out, table, csv::Dialect{'\t'});
}

std::vector<PreparedRow> load_prepared(std::istream& in) {
    while (in.peek() == '#') {
        std::string line;
        std::getline(in, line);
    }
    csv::Table table = csv::read_table(in, csv::Dialect{'\t'});
    auto need = [&](const std::string& name) {
        auto idx = table.find(name);
        if (idx == csv::Table::npos) throw ingest::MissingColumn(name);
        return idx;
    };
    const auto id_idx = need("match_id");
    const auto serve_idx = need("serve_number");
    const auto label_idx = need("label");
    const auto surface_idx = need("surface");
    const auto tour_idx = need("tournament");
    std::vector<std::size_t> numeric_idx;
    for (const auto& name : numeric_columns()) numeric_idx.push_back(need(name));

    std::vector<PreparedRow> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        PreparedRow r;
        r.match_id = row[id_idx];
        r.serve_number = std::atoi(row[serve_idx].c_str());
        r.label = std::atoi(row[label_idx].c_str());
        r.surface = row[surface_idx];
        r.tournament = row[tour_idx];
        r.numeric.reserve(numeric_idx.size());
        for (auto idx : numeric_idx) r.numeric.push_back(std::strtod(row[idx].c_str(), nullptr));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace slampoint::featureset
