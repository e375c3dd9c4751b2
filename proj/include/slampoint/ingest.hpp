#pragma once

// Parsing and merging of the public Grand Slam point-by-point files, the
// companion match metadata, and the ATP ranking snapshots.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "slampoint/csv.hpp"

namespace slampoint::ingest {

// ---------------------------------------------------------------- errors

struct MissingColumn : std::runtime_error {
    explicit MissingColumn(const std::string& name)
        : std::runtime_error("missing required column: " + name), column(name) {}
    std::string column;
};

struct UnknownTournament : std::runtime_error {
    explicit UnknownTournament(const std::string& id)
        : std::runtime_error("unrecognized slam code in match id: " + id) {}
};

struct EmptyScope : std::runtime_error {
    EmptyScope() : std::runtime_error("no matches survive the scope filter") {}
};

struct OrphanPoints : std::runtime_error {
    explicit OrphanPoints(const std::string& id)
        : std::runtime_error("points reference unknown match id: " + id), match_id(id) {}
    std::string match_id;
};

using csv::MalformedRow;

// ---------------------------------------------------------------- raw points

// Per-player event flags of one point row, in Table order.
struct PlayerFlags {
    int ace = 0;
    int winner = 0;
    int double_fault = 0;
    int unf_err = 0;
    int net_point = 0;
    int net_point_won = 0;
    int break_point = 0;
    int break_point_won = 0;
    int break_point_missed = 0;
};

// (flag name stem, member) pairs; used wherever all flags are iterated.
inline constexpr std::array<std::pair<const char*, int PlayerFlags::*>, 9> kEventFlags = {{
    {"Ace", &PlayerFlags::ace},
    {"Winner", &PlayerFlags::winner},
    {"DoubleFault", &PlayerFlags::double_fault},
    {"UnfErr", &PlayerFlags::unf_err},
    {"NetPoint", &PlayerFlags::net_point},
    {"NetPointWon", &PlayerFlags::net_point_won},
    {"BreakPoint", &PlayerFlags::break_point},
    {"BreakPointWon", &PlayerFlags::break_point_won},
    {"BreakPointMissed", &PlayerFlags::break_point_missed},
}};

inline const std::vector<std::string>& serve_width_values() {
    static const std::vector<std::string> v = {"B", "BC", "BW", "C", "W"};
    return v;
}
inline const std::vector<std::string>& serve_depth_values() {
    static const std::vector<std::string> v = {"CTL", "NCTL"};
    return v;
}
inline const std::vector<std::string>& return_depth_values() {
    static const std::vector<std::string> v = {"D", "ND"};
    return v;
}

// The published point-file column set. Parsing preserves the original cell
// of each of these columns so retained rows re-serialize losslessly.
const std::vector<std::string>& table_columns();

// One parsed row of a point-by-point file.
struct RawPoint {
    std::string match_id;
    std::string elapsed_time;  // kept verbatim
    int set_no = 0;
    int game_no = 0;
    int point_number = 0;
    int p1_games_won = 0;
    int p2_games_won = 0;
    int set_winner = 0;    // {0,1,2}
    int game_winner = 0;   // {0,1,2}
    int point_winner = 0;  // {0,1,2}; 0 rows are dropped during assembly
    int point_server = 0;  // {1,2}; 0 when unpublished
    std::optional<double> speed_kmh;
    std::optional<double> speed_mph;
    std::string p1_score;  // in-game token as published ("0","15",... or tiebreak count)
    std::string p2_score;
    int p1_points_won = 0;
    int p2_points_won = 0;
    PlayerFlags p1;
    PlayerFlags p2;
    int serve_indicator = 0;  // {1,2}; 0 when column absent
    int serve_number = 0;     // {1,2}; 0 for artifact rows
    std::string winner_type;
    std::string winner_shot_type;
    std::optional<double> p1_distance_run;
    std::optional<double> p2_distance_run;
    std::optional<double> rally_count;
    std::optional<std::string> serve_width;   // B|BC|BW|C|W
    std::optional<std::string> serve_depth;   // CTL|NCTL
    std::optional<std::string> return_depth;  // D|ND

    // Original cells aligned with table_columns(); empty for absent columns.
    std::vector<std::string> cells;
    // Columns not in the Table set, preserved as (name, value).
    std::vector<std::pair<std::string, std::string>> spillover;

    bool has_serve_placement() const { return serve_width.has_value() && serve_depth.has_value(); }
};

csv::Dialect default_points_dialect();

// One RawPoint per data row. Missing cells stay missing, never zero-filled.
// Throws MissingColumn for absent required columns, MalformedRow on bad rows.
std::vector<RawPoint> parse_points_file(std::istream& source,
                                        const csv::Dialect& dialect = default_points_dialect());

// ---------------------------------------------------------------- match metadata

enum class Tournament { Wimbledon, UsOpen, AustralianOpen, FrenchOpen };

std::string tournament_token(Tournament t);                     // "wimbledon", ...
std::optional<Tournament> tournament_from_token(const std::string& token);
std::string surface_for(Tournament t);                          // "grass", "hard", ...

struct MatchMeta {
    std::string match_id;
    Tournament tournament = Tournament::Wimbledon;
    int year = 0;
    std::string surface;
    std::string player1;
    std::string player2;
    bool mens_singles = false;
    int match_num = 0;
};

std::vector<MatchMeta> parse_matches_file(std::istream& source,
                                          const csv::Dialect& dialect = {});

// ---------------------------------------------------------------- rankings

// Snapshot table; lookups resolve to the latest snapshot on or before the
// query date. Dates are YYYYMMDD integers.
class RankingTable {
  public:
    void add_entry(int ranking_date, int rank, const std::string& player_id, double points);
    void add_player(const std::string& player_id, const std::string& name);
    void finalize();  // sorts entries, resolves duplicates (keeps the better rank)

    // NotRanked is expressed as nullopt.
    std::optional<int> rank_of_id(const std::string& player_id, int date) const;
    std::optional<int> rank_of_name(const std::string& name, int date) const;

    std::size_t entry_count() const { return entries_.size(); }
    std::size_t player_count() const { return name_to_id_.size(); }

  private:
    struct Entry {
        std::string player_id;
        int date;
        int rank;
        double points;
    };
    std::vector<Entry> entries_;  // sorted by (player_id, date) after finalize()
    std::map<std::string, std::string> name_to_id_;  // lowercased name -> id
    bool finalized_ = false;
};

// `ranking_sources` are snapshot files with (ranking_date, rank, player,
// points) rows; `players_source` is the player directory, may be null.
RankingTable parse_rankings(const std::vector<std::istream*>& ranking_sources,
                            std::istream* players_source,
                            const csv::Dialect& dialect = {});

// ---------------------------------------------------------------- assembly

struct Scope {
    std::set<Tournament> tournaments = {Tournament::Wimbledon, Tournament::UsOpen};
    std::set<int> years = {2016, 2017, 2018, 2019, 2020};
    bool mens_singles_only = true;
};

struct Exclusion {
    std::string match_id;
    std::string reason;
};

struct MatchRecord {
    MatchMeta meta;
    int p1_rank = 0;  // sentinel-resolved; see MergedDataset::sentinel_rank
    int p2_rank = 0;
    bool p1_not_ranked = false;
    bool p2_not_ranked = false;
    std::vector<RawPoint> points;
};

struct MergedDataset {
    std::vector<MatchRecord> matches;  // sorted by match_id
    std::vector<Exclusion> exclusions;
    int sentinel_rank = 0;  // max observed rank + 1, assigned to unranked players
    std::size_t dropped_artifact_rows = 0;  // rows with winner 0 / no serve number

    std::size_t total_points() const;
};

// Tournament start dates used for the ranking snapshot query, YYYYMMDD with
// the year filled in. Defaults approximate the real calendars closely
// enough for a latest-on-or-before lookup.
struct RankingDateRule {
    int wimbledon_month_day = 701;  // July 1
    int us_open_month_day = 825;    // Aug 25
    int default_month_day = 101;
    int date_for(Tournament t, int year) const;
};

MergedDataset assemble_dataset(const std::vector<RawPoint>& points,
                               const std::vector<MatchMeta>& matches,
                               const RankingTable& rankings,
                               const Scope& scope,
                               const RankingDateRule& date_rule = {});

// ---------------------------------------------------------------- dataset file

// Self-contained tab-separated dataset persisted by the ingest stage: the
// Table columns verbatim plus attached metadata columns.
struct ArtifactStamp {
    std::string config_hash;  // hex
    std::uint64_t seed = 0;
    std::string schema_version = "1";
};

void write_dataset(std::ostream& out, const MergedDataset& dataset, const ArtifactStamp& stamp);
MergedDataset load_dataset(std::istream& in);

void write_exclusions(std::ostream& out, const std::vector<Exclusion>& exclusions);

}  // namespace slampoint::ingest
