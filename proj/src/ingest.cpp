#include "slampoint/ingest.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "slampoint/common.hpp"

namespace slampoint::ingest {

const std::vector<std::string>& table_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {
            "match_id",    "ElapsedTime", "SetNo",       "P1GamesWon", "P2GamesWon",
            "SetWinner",   "GameNo",      "GameWinner",  "PointNumber", "PointWinner",
            "PointServer", "Speed_KMH",   "P1Score",     "P2Score",     "P1PointsWon",
            "P2PointsWon",
        };
        for (const auto& [stem, member] : kEventFlags) {
            (void)member;
            if (std::string(stem) == "BreakPointMissed") continue;  // placed after Speed_MPH
            c.push_back(std::string("P1") + stem);
            c.push_back(std::string("P2") + stem);
        }
        c.push_back("Speed_MPH");
        c.push_back("P1BreakPointMissed");
        c.push_back("P2BreakPointMissed");
        c.insert(c.end(), {"ServeIndicator", "ServeNumber", "WinnerType", "WinnerShotType",
                           "P1DistanceRun", "P2DistanceRun", "RallyCount", "ServeWidth",
                           "ServeDepth", "ReturnDepth"});
        return c;
    }();
    return cols;
}

csv::Dialect default_points_dialect() { return csv::Dialect{','}; }

namespace {

// Columns the pipeline consumes; their absence is an error. The remaining
// Table columns are carried through when present.
const std::vector<std::string>& required_point_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {
            "match_id",  "SetNo",       "GameNo",      "PointNumber", "PointWinner",
            "PointServer", "ServeNumber", "P1GamesWon", "P2GamesWon",  "SetWinner",
            "GameWinner",  "P1Score",     "P2Score",    "P1PointsWon", "P2PointsWon",
            "ServeWidth",  "ServeDepth",  "ReturnDepth",
        };
        for (const auto& [stem, member] : kEventFlags) {
            (void)member;
            c.push_back(std::string("P1") + stem);
            c.push_back(std::string("P2") + stem);
        }
        return c;
    }();
    return cols;
}

std::size_t find_column(const csv::Table& table, const std::string& name) {
    auto idx = table.find(name);
    if (idx != csv::Table::npos) return idx;
    // tolerate capitalization drift between dataset revisions
    std::string lower = to_lower(name);
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (to_lower(table.columns[i]) == lower) return i;
    return csv::Table::npos;
}

struct ColumnMap {
    // position of each Table column in the source, npos when absent
    std::vector<std::size_t> table_pos;
    std::vector<std::size_t> spill_pos;  // source columns outside the Table set
};

ColumnMap map_columns(const csv::Table& table, bool require) {
    ColumnMap map;
    map.table_pos.resize(table_columns().size(), csv::Table::npos);
    std::vector<bool> claimed(table.columns.size(), false);
    for (std::size_t t = 0; t < table_columns().size(); ++t) {
        auto pos = find_column(table, table_columns()[t]);
        map.table_pos[t] = pos;
        if (pos != csv::Table::npos) claimed[pos] = true;
    }
    if (require) {
        for (const auto& name : required_point_columns()) {
            std::size_t t = 0;
            while (table_columns()[t] != name) ++t;
            if (map.table_pos[t] == csv::Table::npos) throw MissingColumn(name);
        }
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (!claimed[i]) map.spill_pos.push_back(i);
    return map;
}

int parse_int_cell(const std::string& cell, std::size_t line, const std::string& col,
                   int empty_value = 0) {
    std::string t = trim(cell);
    if (t.empty()) return empty_value;
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (end == t.c_str() || *end != '\0')
        throw MalformedRow(line, "non-integer value '" + cell + "' in " + col);
    return static_cast<int>(v);
}

std::optional<double> parse_double_cell(const std::string& cell, std::size_t line,
                                        const std::string& col) {
    std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
        throw MalformedRow(line, "non-numeric value '" + cell + "' in " + col);
    return v;
}

int parse_flag_cell(const std::string& cell, std::size_t line, const std::string& col) {
    int v = parse_int_cell(cell, line, col);
    if (v != 0 && v != 1) throw MalformedRow(line, col + " must be 0 or 1, got '" + cell + "'");
    return v;
}

std::optional<std::string> parse_category_cell(const std::string& cell,
                                               const std::vector<std::string>& vocab,
                                               std::size_t line, const std::string& col) {
    std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    if (std::find(vocab.begin(), vocab.end(), t) == vocab.end())
        throw MalformedRow(line, "unknown " + col + " value '" + cell + "'");
    return t;
}

RawPoint parse_point_row(const csv::Table& table, const ColumnMap& map,
                         const std::vector<std::string>& row, std::size_t line) {
    RawPoint p;
    p.cells.resize(table_columns().size());
    auto cell = [&](const char* name) -> const std::string& {
        static const std::string empty;
        std::size_t t = 0;
        while (table_columns()[t] != name) ++t;
        auto pos = map.table_pos[t];
        return pos == csv::Table::npos ? empty : row[pos];
    };
    for (std::size_t t = 0; t < table_columns().size(); ++t) {
        auto pos = map.table_pos[t];
        if (pos != csv::Table::npos) p.cells[t] = row[pos];
    }
    for (auto pos : map.spill_pos) p.spillover.emplace_back(table.columns[pos], row[pos]);

    p.match_id = trim(cell("match_id"));
    if (p.match_id.empty()) throw MalformedRow(line, "empty match_id");
    p.elapsed_time = cell("ElapsedTime");
    p.set_no = parse_int_cell(cell("SetNo"), line, "SetNo");
    p.game_no = parse_int_cell(cell("GameNo"), line, "GameNo");
    // Artifact rows in the published files carry non-numeric point numbers;
    // they are retained here and dropped during assembly.
    {
        std::string t = trim(cell("PointNumber"));
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        p.point_number = (end != t.c_str() && *end == '\0') ? static_cast<int>(v) : 0;
    }
    p.p1_games_won = parse_int_cell(cell("P1GamesWon"), line, "P1GamesWon");
    p.p2_games_won = parse_int_cell(cell("P2GamesWon"), line, "P2GamesWon");
    p.set_winner = parse_int_cell(cell("SetWinner"), line, "SetWinner");
    p.game_winner = parse_int_cell(cell("GameWinner"), line, "GameWinner");
    p.point_winner = parse_int_cell(cell("PointWinner"), line, "PointWinner");
    p.point_server = parse_int_cell(cell("PointServer"), line, "PointServer");
    for (int v : {p.set_winner, p.game_winner, p.point_winner})
        if (v < 0 || v > 2) throw MalformedRow(line, "player indicator out of range");
    if (p.point_server < 0 || p.point_server > 2)
        throw MalformedRow(line, "PointServer out of range");

    p.speed_kmh = parse_double_cell(cell("Speed_KMH"), line, "Speed_KMH");
    p.speed_mph = parse_double_cell(cell("Speed_MPH"), line, "Speed_MPH");
    // 0 km/h marks an untracked serve in the published data
    if (p.speed_kmh && *p.speed_kmh <= 0.0) p.speed_kmh.reset();
    if (p.speed_mph && *p.speed_mph <= 0.0) p.speed_mph.reset();

    p.p1_score = trim(cell("P1Score"));
    p.p2_score = trim(cell("P2Score"));
    p.p1_points_won = parse_int_cell(cell("P1PointsWon"), line, "P1PointsWon");
    p.p2_points_won = parse_int_cell(cell("P2PointsWon"), line, "P2PointsWon");

    for (const auto& [stem, member] : kEventFlags) {
        p.p1.*member = parse_flag_cell(cell((std::string("P1") + stem).c_str()), line,
                                       std::string("P1") + stem);
        p.p2.*member = parse_flag_cell(cell((std::string("P2") + stem).c_str()), line,
                                       std::string("P2") + stem);
    }

    p.serve_indicator = parse_int_cell(cell("ServeIndicator"), line, "ServeIndicator");
    p.serve_number = parse_int_cell(cell("ServeNumber"), line, "ServeNumber");
    if (p.serve_number < 0 || p.serve_number > 2)
        throw MalformedRow(line, "ServeNumber out of range");
    p.winner_type = trim(cell("WinnerType"));
    p.winner_shot_type = trim(cell("WinnerShotType"));
    p.p1_distance_run = parse_double_cell(cell("P1DistanceRun"), line, "P1DistanceRun");
    p.p2_distance_run = parse_double_cell(cell("P2DistanceRun"), line, "P2DistanceRun");
    p.rally_count = parse_double_cell(cell("RallyCount"), line, "RallyCount");
    p.serve_width = parse_category_cell(cell("ServeWidth"), serve_width_values(), line, "ServeWidth");
    p.serve_depth = parse_category_cell(cell("ServeDepth"), serve_depth_values(), line, "ServeDepth");
    p.return_depth =
        parse_category_cell(cell("ReturnDepth"), return_depth_values(), line, "ReturnDepth");
    return p;
}

std::vector<RawPoint> parse_points_table(const csv::Table& table) {
    ColumnMap map = map_columns(table, /*require=*/true);
    std::vector<RawPoint> points;
    points.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        points.push_back(parse_point_row(table, map, table.rows[i], i + 2));
    return points;
}

}  // namespace

std::vector<RawPoint> parse_points_file(std::istream& source, const csv::Dialect& dialect) {
    return parse_points_table(csv::read_table(source, dialect));
}

// ---------------------------------------------------------------- matches

std::string tournament_token(Tournament t) {
    switch (t) {
        case Tournament::Wimbledon: return "wimbledon";
        case Tournament::UsOpen: return "usopen";
        case Tournament::AustralianOpen: return "ausopen";
        case Tournament::FrenchOpen: return "frenchopen";
    }
    return "wimbledon";
}

std::optional<Tournament> tournament_from_token(const std::string& token) {
    std::string t = to_lower(trim(token));
    if (t == "wimbledon") return Tournament::Wimbledon;
    if (t == "usopen" || t == "us open") return Tournament::UsOpen;
    if (t == "ausopen" || t == "australian open") return Tournament::AustralianOpen;
    if (t == "frenchopen" || t == "french open" || t == "rolandgarros")
        return Tournament::FrenchOpen;
    return std::nullopt;
}

std::string surface_for(Tournament t) {
    switch (t) {
        case Tournament::Wimbledon: return "grass";
        case Tournament::UsOpen: return "hard";
        case Tournament::AustralianOpen: return "hard";
        case Tournament::FrenchOpen: return "clay";
    }
    return "grass";
}

std::vector<MatchMeta> parse_matches_file(std::istream& source, const csv::Dialect& dialect) {
    csv::Table table = csv::read_table(source, dialect);
    auto idx_of = [&](const char* name) { return find_column(table, name); };
    const auto id_idx = idx_of("match_id");
    if (id_idx == csv::Table::npos) throw MissingColumn("match_id");
    const auto year_idx = idx_of("year");
    const auto slam_idx = idx_of("slam");
    const auto num_idx = idx_of("match_num");
    const auto p1_idx = idx_of("player1");
    const auto p2_idx = idx_of("player2");
    const auto event_idx = idx_of("event_name");
    if (p1_idx == csv::Table::npos) throw MissingColumn("player1");
    if (p2_idx == csv::Table::npos) throw MissingColumn("player2");

    std::vector<MatchMeta> out;
    out.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = i + 2;
        MatchMeta m;
        m.match_id = trim(row[id_idx]);
        if (m.match_id.empty()) throw MalformedRow(line, "empty match_id");

        // id convention: <year>-<slam>-<match_num>
        auto id_parts = split(m.match_id, '-');
        std::string slam_token;
        if (slam_idx != csv::Table::npos && !trim(row[slam_idx]).empty())
            slam_token = row[slam_idx];
        else if (id_parts.size() >= 2)
            slam_token = id_parts[1];
        auto tour = tournament_from_token(slam_token);
        if (!tour) throw UnknownTournament(m.match_id);
        m.tournament = *tour;
        m.surface = surface_for(m.tournament);

        if (year_idx != csv::Table::npos && !trim(row[year_idx]).empty())
            m.year = parse_int_cell(row[year_idx], line, "year");
        else if (!id_parts.empty())
            m.year = parse_int_cell(id_parts[0], line, "match_id year prefix");
        if (m.year < 1900 || m.year > 2100) throw MalformedRow(line, "implausible year");

        if (num_idx != csv::Table::npos && !trim(row[num_idx]).empty())
            m.match_num = parse_int_cell(row[num_idx], line, "match_num");
        else if (id_parts.size() >= 3)
            m.match_num = parse_int_cell(id_parts[2], line, "match_id match number");

        m.player1 = trim(row[p1_idx]);
        m.player2 = trim(row[p2_idx]);

        // The men's singles draw uses match numbers 11xx..17xx; the event
        // name, when present, is authoritative.
        if (event_idx != csv::Table::npos && !trim(row[event_idx]).empty()) {
            std::string ev = to_lower(row[event_idx]);
            m.mens_singles = ev.find("gentlemen") != std::string::npos ||
                             ev.find("men's singles") != std::string::npos ||
                             ev.find("mens singles") != std::string::npos;
            if (ev.find("ladies") != std::string::npos || ev.find("women") != std::string::npos)
                m.mens_singles = false;
        } else {
            m.mens_singles = m.match_num >= 1100 && m.match_num < 2000;
        }
        out.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------- rankings

void RankingTable::add_entry(int ranking_date, int rank, const std::string& player_id,
                             double points) {
    entries_.push_back({player_id, ranking_date, rank, points});
    finalized_ = false;
}

void RankingTable::add_player(const std::string& player_id, const std::string& name) {
    name_to_id_[to_lower(trim(name))] = player_id;
}

void RankingTable::finalize() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        if (a.player_id != b.player_id) return a.player_id < b.player_id;
        if (a.date != b.date) return a.date < b.date;
        return a.rank < b.rank;
    });
    // duplicate (player, date) snapshots: keep the better (lower) rank
    std::vector<Entry> unique;
    unique.reserve(entries_.size());
    for (auto& e : entries_) {
        if (!unique.empty() && unique.back().player_id == e.player_id &&
            unique.back().date == e.date) {
            warn("duplicate ranking entry for player " + e.player_id + " on " +
                 std::to_string(e.date) + ", keeping rank " + std::to_string(unique.back().rank));
            continue;
        }
        unique.push_back(std::move(e));
    }
    entries_ = std::move(unique);
    finalized_ = true;
}

std::optional<int> RankingTable::rank_of_id(const std::string& player_id, int date) const {
    if (!finalized_) throw std::logic_error("RankingTable::finalize() not called");
    // last entry for player_id with entry.date <= date
    Entry probe{player_id, date, 0, 0.0};
    auto it = std::upper_bound(entries_.begin(), entries_.end(), probe,
                               [](const Entry& a, const Entry& b) {
                                   if (a.player_id != b.player_id) return a.player_id < b.player_id;
                                   return a.date < b.date;
                               });
    if (it == entries_.begin()) return std::nullopt;
    --it;
    if (it->player_id != player_id) return std::nullopt;
    return it->rank;
}

std::optional<int> RankingTable::rank_of_name(const std::string& name, int date) const {
    auto it = name_to_id_.find(to_lower(trim(name)));
    if (it == name_to_id_.end()) return std::nullopt;
    return rank_of_id(it->second, date);
}

RankingTable parse_rankings(const std::vector<std::istream*>& ranking_sources,
                            std::istream* players_source, const csv::Dialect& dialect) {
    RankingTable table;
    for (std::istream* src : ranking_sources) {
        csv::Table t = csv::read_table(*src, dialect);
        auto date_idx = find_column(t, "ranking_date");
        auto rank_idx = find_column(t, "rank");
        auto player_idx = find_column(t, "player");
        auto points_idx = find_column(t, "points");
        if (date_idx == csv::Table::npos) throw MissingColumn("ranking_date");
        if (rank_idx == csv::Table::npos) throw MissingColumn("rank");
        if (player_idx == csv::Table::npos) throw MissingColumn("player");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& row = t.rows[i];
            const std::size_t line = i + 2;
            int date = parse_int_cell(row[date_idx], line, "ranking_date");
            int rank = parse_int_cell(row[rank_idx], line, "rank");
            if (rank < 1) throw MalformedRow(line, "rank must be >= 1");
            double points = 0.0;
            if (points_idx != csv::Table::npos)
                points = parse_double_cell(row[points_idx], line, "points").value_or(0.0);
            table.add_entry(date, rank, trim(row[player_idx]), points);
        }
    }
    if (players_source) {
        csv::Table t = csv::read_table(*players_source, dialect);
        auto id_idx = find_column(t, "player_id");
        auto first_idx = find_column(t, "name_first");
        auto last_idx = find_column(t, "name_last");
        if (id_idx == csv::Table::npos) throw MissingColumn("player_id");
        if (first_idx == csv::Table::npos) throw MissingColumn("name_first");
        if (last_idx == csv::Table::npos) throw MissingColumn("name_last");
        for (const auto& row : t.rows) {
            std::string name = trim(row[first_idx]) + " " + trim(row[last_idx]);
            table.add_player(trim(row[id_idx]), name);
        }
    }
    table.finalize();
    return table;
}

// ---------------------------------------------------------------- assembly

int RankingDateRule::date_for(Tournament t, int year) const {
    int md = default_month_day;
    if (t == Tournament::Wimbledon) md = wimbledon_month_day;
    if (t == Tournament::UsOpen) md = us_open_month_day;
    return year * 10000 + md;
}

std::size_t MergedDataset::total_points() const {
    std::size_t n = 0;
    for (const auto& m : matches) n += m.points.size();
    return n;
}

MergedDataset assemble_dataset(const std::vector<RawPoint>& points,
                               const std::vector<MatchMeta>& matches,
                               const RankingTable& rankings, const Scope& scope,
                               const RankingDateRule& date_rule) {
    std::map<std::string, const MatchMeta*> meta_by_id;
    for (const auto& m : matches) {
        auto [it, inserted] = meta_by_id.emplace(m.match_id, &m);
        if (!inserted) warn("duplicate match metadata for " + m.match_id + ", keeping first");
    }

    std::map<std::string, std::vector<const RawPoint*>> points_by_id;
    for (const auto& p : points) {
        if (!meta_by_id.count(p.match_id)) throw OrphanPoints(p.match_id);
        points_by_id[p.match_id].push_back(&p);
    }

    MergedDataset out;
    auto exclude = [&](const std::string& id, const std::string& reason) {
        out.exclusions.push_back({id, reason});
    };

    for (const auto& [id, meta] : meta_by_id) {
        const MatchMeta& m = *meta;
        if (!scope.tournaments.count(m.tournament)) {
            exclude(id, "tournament_out_of_scope");
            continue;
        }
        if (!scope.years.count(m.year)) {
            exclude(id, "year_out_of_scope");
            continue;
        }
        if (scope.mens_singles_only && !m.mens_singles) {
            exclude(id, "not_mens_singles");
            continue;
        }
        auto it = points_by_id.find(id);
        if (it == points_by_id.end()) {
            exclude(id, "no_points");
            continue;
        }

        MatchRecord rec;
        rec.meta = m;
        for (const RawPoint* p : it->second) {
            bool artifact = (p->point_winner != 1 && p->point_winner != 2) ||
                            (p->point_server != 1 && p->point_server != 2) ||
                            (p->serve_number != 1 && p->serve_number != 2);
            if (artifact) {
                ++out.dropped_artifact_rows;
                continue;
            }
            rec.points.push_back(*p);
        }
        if (rec.points.empty()) {
            exclude(id, "no_points");
            continue;
        }
        bool placement_complete = std::all_of(rec.points.begin(), rec.points.end(),
                                              [](const RawPoint& p) { return p.has_serve_placement(); });
        if (!placement_complete) {
            exclude(id, "missing_serve_placement");
            continue;
        }
        bool ordered = true;
        for (std::size_t i = 1; i < rec.points.size(); ++i) {
            const auto& a = rec.points[i - 1];
            const auto& b = rec.points[i];
            auto key = [](const RawPoint& p) {
                return std::tuple<int, int, int>(p.set_no, p.game_no, p.point_number);
            };
            if (!(key(a) < key(b))) {
                ordered = false;
                break;
            }
        }
        if (!ordered) {
            exclude(id, "unordered_points");
            continue;
        }

        int date = date_rule.date_for(m.tournament, m.year);
        auto r1 = rankings.rank_of_name(m.player1, date);
        auto r2 = rankings.rank_of_name(m.player2, date);
        rec.p1_not_ranked = !r1.has_value();
        rec.p2_not_ranked = !r2.has_value();
        rec.p1_rank = r1.value_or(0);
        rec.p2_rank = r2.value_or(0);
        out.matches.push_back(std::move(rec));
    }

    if (out.matches.empty()) throw EmptyScope();

    int max_rank = 0;
    for (const auto& rec : out.matches) {
        if (!rec.p1_not_ranked) max_rank = std::max(max_rank, rec.p1_rank);
        if (!rec.p2_not_ranked) max_rank = std::max(max_rank, rec.p2_rank);
    }
    out.sentinel_rank = max_rank + 1;
    for (auto& rec : out.matches) {
        if (rec.p1_not_ranked) rec.p1_rank = out.sentinel_rank;
        if (rec.p2_not_ranked) rec.p2_rank = out.sentinel_rank;
    }

    std::sort(out.exclusions.begin(), out.exclusions.end(),
              [](const Exclusion& a, const Exclusion& b) { return a.match_id < b.match_id; });
    return out;
}

// ---------------------------------------------------------------- dataset file

namespace {

const std::vector<std::string>& meta_columns() {
    static const std::vector<std::string> cols = {
        "Tournament", "Year",   "Surface",     "P1Player",    "P2Player",
        "P1Rank",     "P2Rank", "P1NotRanked", "P2NotRanked",
    };
    return cols;
}

}  // namespace

void write_dataset(std::ostream& out, const MergedDataset& dataset, const ArtifactStamp& stamp) {
    out << "# slampoint dataset v" << stamp.schema_version << "\n";
    out << "# config=" << stamp.config_hash << " seed=" << stamp.seed << "\n";
    out << "# matches=" << dataset.matches.size() << " points=" << dataset.total_points()
        << " sentinel_rank=" << dataset.sentinel_rank << "\n";

    csv::Table table;
    table.columns = table_columns();
    table.columns.insert(table.columns.end(), meta_columns().begin(), meta_columns().end());
    for (const auto& rec : dataset.matches) {
        for (const auto& p : rec.points) {
            std::vector<std::string> row = p.cells;
            row.push_back(tournament_token(rec.meta.tournament));
            row.push_back(std::to_string(rec.meta.year));
            row.push_back(rec.meta.surface);
            row.push_back(rec.meta.player1);
            row.push_back(rec.meta.player2);
            row.push_back(std::to_string(rec.p1_rank));
            row.push_back(std::to_string(rec.p2_rank));
            row.push_back(rec.p1_not_ranked ? "1" : "0");
            row.push_back(rec.p2_not_ranked ? "1" : "0");
            table.rows.push_back(std::move(row));
        }
    }
    write_table(out, table, csv::Dialect{'\t'});
}

MergedDataset load_dataset(std::istream& in) {
    int sentinel = 0;
    // skip the comment preamble
    while (in.peek() == '#') {
        std::string line;
        std::getline(in, line);
        auto pos = line.find("sentinel_rank=");
        if (pos != std::string::npos) sentinel = std::atoi(line.c_str() + pos + 14);
    }
    csv::Table table = csv::read_table(in, csv::Dialect{'\t'});
    ColumnMap map = map_columns(table, /*require=*/true);

    auto meta_idx = [&](const char* name) {
        auto idx = find_column(table, name);
        if (idx == csv::Table::npos) throw MissingColumn(name);
        return idx;
    };
    const auto tour_idx = meta_idx("Tournament");
    const auto year_idx = meta_idx("Year");
    const auto surface_idx = meta_idx("Surface");
    const auto p1p_idx = meta_idx("P1Player");
    const auto p2p_idx = meta_idx("P2Player");
    const auto r1_idx = meta_idx("P1Rank");
    const auto r2_idx = meta_idx("P2Rank");
    const auto nr1_idx = meta_idx("P1NotRanked");
    const auto nr2_idx = meta_idx("P2NotRanked");

    MergedDataset out;
    out.sentinel_rank = sentinel;
    std::map<std::string, std::size_t> match_pos;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = i + 2;
        RawPoint p = parse_point_row(table, map, row, line);
        // the metadata columns land in the spillover; they are rebuilt into
        // MatchRecord fields instead
        std::erase_if(p.spillover, [&](const auto& kv) {
            return std::find(meta_columns().begin(), meta_columns().end(), kv.first) !=
                   meta_columns().end();
        });

        auto it = match_pos.find(p.match_id);
        if (it == match_pos.end()) {
            MatchRecord rec;
            rec.meta.match_id = p.match_id;
            auto tour = tournament_from_token(row[tour_idx]);
            if (!tour) throw UnknownTournament(p.match_id);
            rec.meta.tournament = *tour;
            rec.meta.year = parse_int_cell(row[year_idx], line, "Year");
            rec.meta.surface = trim(row[surface_idx]);
            rec.meta.player1 = trim(row[p1p_idx]);
            rec.meta.player2 = trim(row[p2p_idx]);
            rec.meta.mens_singles = true;
            rec.p1_rank = parse_int_cell(row[r1_idx], line, "P1Rank");
            rec.p2_rank = parse_int_cell(row[r2_idx], line, "P2Rank");
            rec.p1_not_ranked = parse_flag_cell(row[nr1_idx], line, "P1NotRanked") == 1;
            rec.p2_not_ranked = parse_flag_cell(row[nr2_idx], line, "P2NotRanked") == 1;
            it = match_pos.emplace(p.match_id, out.matches.size()).first;
            out.matches.push_back(std::move(rec));
        }
        out.matches[it->second].points.push_back(std::move(p));
    }
    std::sort(out.matches.begin(), out.matches.end(),
              [](const MatchRecord& a, const MatchRecord& b) {
                  return a.meta.match_id < b.meta.match_id;
              });
    return out;
}

void write_exclusions(std::ostream& out, const std::vector<Exclusion>& exclusions) {
    out << "match_id\treason\n";
    for (const auto& e : exclusions) out << e.match_id << "\t" << e.reason << "\n";
}

}  // namespace slampoint::ingest
