#pragma once

// Deterministic match simulator producing fixture files in the published
// raw layout (points, matches, rankings, players), plus bundle writers the
// end-to-end tests point the pipeline at.

#include <cstdint>
#include <string>
#include <vector>

#include "slampoint/csv.hpp"
#include "slampoint/ingest.hpp"

namespace slampoint::testsupport {

struct SimOptions {
    std::string match_id;  // defaults to "<year>-<slam>-<match_num>"
    ingest::Tournament tournament = ingest::Tournament::Wimbledon;
    int year = 2019;
    int match_num = 1101;
    std::string player1 = "Alpha Server";
    std::string player2 = "Beta Returner";
    std::string event_name = "Gentlemen's Singles";
    int best_of = 5;
    double p_first_in = 0.62;       // first serve lands
    double p_win_first = 0.73;      // server wins given a first serve in
    double p_win_second = 0.60;     // server wins a second-serve rally
    double p_double_fault = 0.10;   // double fault given a second serve
    std::uint64_t seed = 1;
    bool emit_artifact_row = true;  // prepend a scoreless "0X" preamble row
};

struct SimMatch {
    SimOptions options;
    csv::Table points;  // full published column layout, one row per point

    ingest::MatchMeta meta() const;
};

SimMatch simulate_match(const SimOptions& options);

// rank 0 means the player is absent from the ranking files (NotRanked path)
struct RankingSpec {
    std::string player_id;
    std::string name;
    int rank = 0;
};

// Writes "<year>-<slam>-points.csv" / "-matches.csv" groups plus one
// rankings and one players file into `dir` (created if needed).
void write_fixture_bundle(const std::string& dir, const std::vector<SimMatch>& matches,
                          const std::vector<RankingSpec>& rankings);

// n simulated men's matches across Wimbledon/US Open 2016-2020 with varied
// serve profiles; every match gets two fresh players. Best-of-five keeps the
// simulated final sets under the same rules the feature pipeline assumes.
std::vector<SimMatch> default_sim_matches(int n, std::uint64_t seed, int best_of = 5);
std::vector<RankingSpec> default_rankings(const std::vector<SimMatch>& matches);

// Assembled dataset over simulated matches, without touching the filesystem.
ingest::MergedDataset assemble_sim(const std::vector<SimMatch>& matches,
                                   const std::vector<RankingSpec>& rankings);

}  // namespace slampoint::testsupport
