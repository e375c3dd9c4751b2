#pragma once

// Descriptive statistics and figure artifacts: serve-placement grids,
// win-rate summaries, court heatmaps, and importance charts.

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "slampoint/ingest.hpp"

namespace slampoint::analysis {

struct EmptySelection : std::runtime_error {
    explicit EmptySelection(const std::string& what) : std::runtime_error(what) {}
};

enum class Court { Deuce, Ad };

std::string court_name(Court c);  // "deuce" | "ad"

// Court side served to, derived from the in-game score: even number of
// points already played in the current game -> deuce court. Regular-game
// tokens count by ordinal (0/15/30/40/AD -> 0..4), tiebreak tokens by their
// integer value; both preserve the points-played parity.
Court court_of(const ingest::RawPoint& point);

// ---------------------------------------------------------------- placement

// Width x depth placement frequencies for one (serve number, court side)
// selection, as percentages of the successful serves in scope. Rows where
// the server double-faulted are excluded: the final serve of those points
// never landed.
struct PlacementGrid {
    int serve_number = 1;
    Court court = Court::Deuce;
    // cells[w][d]: w indexes serve_width_values (B,BC,BW,C,W),
    // d indexes serve_depth_values (CTL,NCTL). Percentages summing to 100.
    std::array<std::array<double, 2>, 5> cells{};
    std::size_t n_serves = 0;

    // Share placed close to the sidelines, interpreted as width in {W, BW}.
    double wide_line_share() const;
};

PlacementGrid placement_grid(const std::vector<ingest::MatchRecord>& matches, int serve_number,
                             Court court);

// ---------------------------------------------------------------- win rates

struct WinRateSummary {
    double p_first = 0.0;    // server win rate on first-serve points
    double p_second = 0.0;   // on second-serve points (double faults included)
    double p_overall = 0.0;  // all points
    std::size_t n_first = 0;
    std::size_t n_second = 0;
};

// Conditional server win rates by recorded serve number. A first-serve row
// exists only when the first serve landed, so p_first is the successful-
// first-serve rate; double faults stay in the second-serve denominator,
// keeping p_second equal to the second-serve label prior.
WinRateSummary win_rate_summary(const std::vector<ingest::MatchRecord>& matches);

std::string win_rate_table(const WinRateSummary& summary);  // TSV

// ---------------------------------------------------------------- rendering

struct HeatmapStyle {
    int cell_w = 88;
    int cell_h = 96;
    std::string fill = "#1f6fb2";
};

// One-quarter court with the 10 labeled cells, each annotated with its
// percentage and shaded by magnitude. Byte-deterministic for fixed input.
std::string render_court_heatmap(const PlacementGrid& grid, const HeatmapStyle& style = {});

// ---------------------------------------------------------------- importance

struct ImportanceEntry {
    std::string feature;
    double share = 0.0;
};

struct ImportanceReport {
    double threshold = 0.01;
    std::vector<ImportanceEntry> entries;  // share strictly above threshold, descending
};

// Keeps shares strictly greater than `threshold`, sorted descending
// (ties: feature name ascending).
ImportanceReport importance_report(const std::map<std::string, double>& importances,
                                   double threshold = 0.01);

std::string importance_table(const ImportanceReport& report);  // TSV, notice when empty
std::string render_importance_chart(const ImportanceReport& report);  // SVG bars

}  // namespace slampoint::analysis
