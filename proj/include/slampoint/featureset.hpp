#pragma once

// Leak-free, server-perspective training rows: accumulated history counters,
// the one-row outcome shift, the P1/P2 perspective swap, one-hot encoding
// with training-side standardization, and the match-level split plan.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slampoint/ingest.hpp"

namespace slampoint::featureset {

// ---------------------------------------------------------------- errors

struct UnorderedPoints : std::runtime_error {
    explicit UnorderedPoints(const std::string& match_id)
        : std::runtime_error("points of match " + match_id +
                             " are not ordered by (set, game, point)") {}
};

struct UnpairedColumn : std::runtime_error {
    explicit UnpairedColumn(const std::string& name)
        : std::runtime_error("player-paired column without a twin: " + name), column(name) {}
    std::string column;
};

struct TooFewMatches : std::runtime_error {
    explicit TooFewMatches(std::size_t n)
        : std::runtime_error("split plan needs at least 20 matches, got " + std::to_string(n)) {}
};

// ---------------------------------------------------------------- columns

// The frozen numeric column list (54 names, see docs/feature_schema.md):
// 18 serve-time context columns followed by 36 accumulated "A" columns.
const std::vector<std::string>& numeric_columns();

// The accumulated slice of numeric_columns(): 18 event-flag counters plus
// 18 serve/return placement counters.
const std::vector<std::string>& accumulated_columns();

// In-game score tokens "0","15","30","40","AD" as ordinals 0..4.
int score_ordinal(const std::string& token);

// Whether the game that starts when the set score is (games1, games2) is a
// tiebreak, per the tournament's historical rules for best-of-five play.
bool is_tiebreak_game(ingest::Tournament t, int year, int set_no, int games1, int games2);

// ---------------------------------------------------------------- stages

// accumulate: strict prefix counts of every event flag and every serve /
// return placement category. Row i counts occurrences over rows j < i only;
// serve placements are credited to that point's server, return depths to its
// returner. One row per point, aligned with accumulated_columns().
std::vector<std::vector<int>> accumulate(const std::vector<ingest::RawPoint>& points);

// Pre-point scoreboard of one row, produced by shift_outcomes.
struct StateRow {
    int p1_score = 0;  // ordinal 0..4, or the point count inside a tiebreak
    int p2_score = 0;
    int tiebreak = 0;
    int p1_games = 0;
    int p2_games = 0;
    int p1_sets = 0;
    int p2_sets = 0;
    int p1_points = 0;
    int p2_points = 0;
};

// shift_outcomes: the published rows carry post-point state; row i of the
// result holds the state as it stood when point i began. In-game scores
// reset at game boundaries and games at set boundaries; the synthetic
// post-match state falls off the end.
std::vector<StateRow> shift_outcomes(const std::vector<ingest::RawPoint>& points,
                                     const ingest::MatchMeta& meta);

// Numeric per-point table prior to the perspective swap.
struct WideTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<int> point_server;  // {1,2} per row
    std::vector<int> point_winner;  // {1,2} per row
};

// to_server_perspective: for rows served by player 2 every P1*/P2* column
// pair is exchanged, so that P1 always denotes the server. Returns the label
// per row (1 = server won); the table's server entries become 1.
// Throws UnpairedColumn if a P1 column lacks its P2 twin or vice versa.
std::vector<int> to_server_perspective(WideTable& table);

// ---------------------------------------------------------------- prepared rows

struct PreparedRow {
    std::string match_id;
    int serve_number = 1;  // 1|2
    int label = 0;         // 1 = server wins the point
    std::string surface;
    std::string tournament;
    std::vector<double> numeric;  // aligned with numeric_columns()
};

// Full per-match pipeline: ordering check, accumulate, shift, swap.
std::vector<PreparedRow> prepare_match(const ingest::MatchRecord& match);

// All matches, in dataset (match-id) order.
std::vector<PreparedRow> prepare_dataset(const ingest::MergedDataset& dataset);

// Partition by serve number; (first-serve rows, second-serve rows).
std::pair<std::vector<PreparedRow>, std::vector<PreparedRow>> split_by_serve(
    const std::vector<PreparedRow>& rows);

std::vector<PreparedRow> filter_by_match_ids(const std::vector<PreparedRow>& rows,
                                             const std::set<std::string>& ids);

// ---------------------------------------------------------------- schema

struct SchemaColumn {
    std::string name;
    bool one_hot = false;
    std::string group;     // one-hot group name, "-" for numeric columns
    std::string category;  // one-hot category, "-" for numeric columns
    bool fitted = false;   // standardization parameters present
    double mean = 0.0;
    double sd = 1.0;
};

struct FeatureSchema {
    std::vector<SchemaColumn> columns;
    // group -> ordered categories; includes the fixed placement dictionaries
    // for documentation alongside the fitted surface/tournament groups.
    std::map<std::string, std::vector<std::string>> dictionaries;

    std::size_t width() const { return columns.size(); }
    std::uint64_t fingerprint() const;  // stable over names/kinds/dictionaries

    std::string to_text() const;  // human-readable sidecar, parseable
    static FeatureSchema from_text(const std::string& text);
};

// Fits column list, dictionaries, and standardization parameters (numeric
// columns only; sd 0 is treated as 1) on the given rows. Fit rows must be
// the training side only — transform never updates parameters.
FeatureSchema fit_schema(const std::vector<PreparedRow>& fit_rows);

struct FeatureMatrix {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> x;  // row-major
    std::vector<int> y;
    std::vector<std::string> match_id;    // per row
    std::vector<int> serve_number;        // per row

    std::size_t n_rows() const { return x.size(); }
    std::size_t n_cols() const { return columns.size(); }
};

// Applies the schema. A category value absent from the fitted dictionary
// encodes as all zeros for its group and logs one warning per distinct value.
FeatureMatrix transform(const std::vector<PreparedRow>& rows, const FeatureSchema& schema);

// ---------------------------------------------------------------- split plan

struct SplitPlan {
    static constexpr int kFolds = 10;

    std::uint64_t seed = 0;
    std::vector<std::string> test_ids;
    std::vector<std::string> train_ids;
    std::vector<std::string> validation_ids;
    std::map<std::string, int> fold_of;  // train+validation ids -> fold 0..9

    std::set<std::string> train_and_validation() const;
};

// 10% of matches (round half up, minimum 1) to test; the remainder split
// 80/20 into train/validation; folds assigned round-robin over the shuffled
// train+validation ids. Deterministic under seed. Throws TooFewMatches
// below 20 matches.
SplitPlan make_split_plan(const std::vector<std::string>& match_ids, std::uint64_t seed);

void write_split_plan(std::ostream& out, const SplitPlan& plan);
SplitPlan load_split_plan(std::istream& in);

// ---------------------------------------------------------------- prepared file

void write_prepared(std::ostream& out, const std::vector<PreparedRow>& rows,
                    const ingest::ArtifactStamp& stamp);
std::vector<PreparedRow> load_prepared(std::istream& in);

}  // namespace slampoint::featureset
