#include "slampoint/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "slampoint/common.hpp"
#include "slampoint/featureset.hpp"

namespace slampoint::analysis {

std::string court_name(Court c) { return c == Court::Deuce ? "deuce" : "ad"; }

namespace {

// Points-played parity contribution of one score token.
int score_progress(const std::string& token) {
    try {
        return featureset::score_ordinal(token);
    } catch (const std::exception&) {
        char* end = nullptr;
        const long v = std::strtol(token.c_str(), &end, 10);
        if (end == token.c_str() || *end != '\0' || v < 0)
            throw std::runtime_error("unrecognized score token '" + token + "'");
        return static_cast<int>(v);
    }
}

bool server_double_faulted(const ingest::RawPoint& p) {
    return p.point_server == 1 ? p.p1.double_fault == 1 : p.p2.double_fault == 1;
}

std::size_t width_index(const std::string& w) {
    const auto& values = ingest::serve_width_values();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == w) return i;
    return values.size();
}

std::size_t depth_index(const std::string& d) {
    const auto& values = ingest::serve_depth_values();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == d) return i;
    return values.size();
}

}  // namespace

Court court_of(const ingest::RawPoint& point) {
    const int played = score_progress(point.p1_score) + score_progress(point.p2_score);
    return played % 2 == 0 ? Court::Deuce : Court::Ad;
}

double PlacementGrid::wide_line_share() const {
    // serve_width_values order is B,BC,BW,C,W: wide-line cells are BW (2) and W (4)
    return cells[2][0] + cells[2][1] + cells[4][0] + cells[4][1];
}

PlacementGrid placement_grid(const std::vector<ingest::MatchRecord>& matches, int serve_number,
                             Court court) {
    PlacementGrid grid;
    grid.serve_number = serve_number;
    grid.court = court;

    std::array<std::array<std::size_t, 2>, 5> counts{};
    for (const auto& match : matches) {
        for (const auto& p : match.points) {
            if (p.serve_number != serve_number || !p.has_serve_placement()) continue;
            if (server_double_faulted(p)) continue;  // the final serve never landed
            if (court_of(p) != court) continue;
            const std::size_t w = width_index(*p.serve_width);
            const std::size_t d = depth_index(*p.serve_depth);
            if (w >= 5 || d >= 2) {
                warn("placement_grid: unrecognized placement '" + *p.serve_width + "/" +
                     *p.serve_depth + "' skipped");
                continue;
            }
            counts[w][d] += 1;
            grid.n_serves += 1;
        }
    }
    if (grid.n_serves == 0)
        throw EmptySelection("placement_grid: no successful serves for serve " +
                             std::to_string(serve_number) + ", " + court_name(court) + " court");
    for (std::size_t w = 0; w < 5; ++w)
        for (std::size_t d = 0; d < 2; ++d)
            grid.cells[w][d] =
                100.0 * static_cast<double>(counts[w][d]) / static_cast<double>(grid.n_serves);
    return grid;
}

WinRateSummary win_rate_summary(const std::vector<ingest::MatchRecord>& matches) {
    WinRateSummary s;
    std::size_t wins_first = 0, wins_second = 0;
    for (const auto& match : matches) {
        for (const auto& p : match.points) {
            const bool server_won = p.point_winner == p.point_server;
            if (p.serve_number == 1) {
                s.n_first += 1;
                wins_first += server_won;
            } else if (p.serve_number == 2) {
                s.n_second += 1;
                wins_second += server_won;
            }
        }
    }
    const std::size_t total = s.n_first + s.n_second;
    if (total == 0) throw EmptySelection("win_rate_summary: no points in scope");
    s.p_first = s.n_first == 0 ? 0.0
                               : static_cast<double>(wins_first) / static_cast<double>(s.n_first);
    s.p_second = s.n_second == 0
                     ? 0.0
                     : static_cast<double>(wins_second) / static_cast<double>(s.n_second);
    s.p_overall = static_cast<double>(wins_first + wins_second) / static_cast<double>(total);
    return s;
}

std::string win_rate_table(const WinRateSummary& summary) {
    std::string out = "selection\tn_points\twin_rate\n";
    out += "first_serve\t" + std::to_string(summary.n_first) + "\t" +
           fmt_double(summary.p_first, 4) + "\n";
    out += "second_serve\t" + std::to_string(summary.n_second) + "\t" +
           fmt_double(summary.p_second, 4) + "\n";
    out += "overall\t" + std::to_string(summary.n_first + summary.n_second) + "\t" +
           fmt_double(summary.p_overall, 4) + "\n";
    return out;
}

// ---------------------------------------------------------------- rendering

namespace {

std::string svg_text(int x, int y, const std::string& body, const std::string& extra = "") {
    return "  <text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" font-family=\"monospace\" font-size=\"12\"" + extra + ">" + body + "</text>\n";
}

}  // namespace

std::string render_court_heatmap(const PlacementGrid& grid, const HeatmapStyle& style) {
    const auto& widths = ingest::serve_width_values();
    const auto& depths = ingest::serve_depth_values();
    const int margin_l = 64, margin_t = 48;
    const int plot_w = style.cell_w * 5;
    const int plot_h = style.cell_h * 2;
    const int total_w = margin_l + plot_w + 24;
    const int total_h = margin_t + plot_h + 40;

    double max_cell = 0.0;
    for (const auto& row : grid.cells)
        for (double v : row) max_cell = std::max(max_cell, v);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(total_w) +
           "\" height=\"" + std::to_string(total_h) + "\">\n";
    svg += "  <rect width=\"" + std::to_string(total_w) + "\" height=\"" +
           std::to_string(total_h) + "\" fill=\"white\"/>\n";
    svg += svg_text(margin_l, 20,
                    "serve " + std::to_string(grid.serve_number) + ", " + court_name(grid.court) +
                        " court (quarter-court placement, % of successful serves)");
    svg += svg_text(margin_l, 36, "n = " + std::to_string(grid.n_serves));

    for (std::size_t w = 0; w < widths.size(); ++w) {
        for (std::size_t d = 0; d < depths.size(); ++d) {
            const int x = margin_l + static_cast<int>(w) * style.cell_w;
            const int y = margin_t + static_cast<int>(d) * style.cell_h;
            const double share = max_cell > 0.0 ? grid.cells[w][d] / max_cell : 0.0;
            svg += "  <rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
                   "\" width=\"" + std::to_string(style.cell_w) + "\" height=\"" +
                   std::to_string(style.cell_h) + "\" fill=\"" + style.fill +
                   "\" fill-opacity=\"" + fmt_double(share, 4) +
                   "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
            svg += svg_text(x + 8, y + style.cell_h / 2 + 4,
                            fmt_double(grid.cells[w][d], 1) + "%",
                            grid.cells[w][d] / std::max(max_cell, 1e-12) > 0.55
                                ? std::string(" fill=\"white\"")
                                : std::string());
        }
    }
    for (std::size_t w = 0; w < widths.size(); ++w)
        svg += svg_text(margin_l + static_cast<int>(w) * style.cell_w + 8,
                        margin_t + plot_h + 18, widths[w]);
    for (std::size_t d = 0; d < depths.size(); ++d)
        svg += svg_text(8, margin_t + static_cast<int>(d) * style.cell_h + style.cell_h / 2 + 4,
                        depths[d]);
    svg += "</svg>\n";
    return svg;
}

// ---------------------------------------------------------------- importance

ImportanceReport importance_report(const std::map<std::string, double>& importances,
                                   double threshold) {
    ImportanceReport report;
    report.threshold = threshold;
    for (const auto& [feature, share] : importances)
        if (share > threshold) report.entries.push_back({feature, share});
    std::sort(report.entries.begin(), report.entries.end(),
              [](const ImportanceEntry& a, const ImportanceEntry& b) {
                  if (a.share != b.share) return a.share > b.share;
                  return a.feature < b.feature;
              });
    return report;
}

std::string importance_table(const ImportanceReport& report) {
    std::string out;
    if (report.entries.empty())
        out += "# no features with gain share > " + fmt_double_exact(report.threshold) + "\n";
    out += "feature\tgain_share\n";
    for (const auto& e : report.entries)
        out += e.feature + "\t" + fmt_double(e.share, 6) + "\n";
    return out;
}

std::string render_importance_chart(const ImportanceReport& report) {
    const int bar_h = 18, gap = 6, margin_l = 240, margin_t = 40;
    const int bar_max_w = 420;
    const int n = static_cast<int>(report.entries.size());
    const int total_w = margin_l + bar_max_w + 96;
    const int total_h = margin_t + std::max(n, 1) * (bar_h + gap) + 24;

    double max_share = 0.0;
    for (const auto& e : report.entries) max_share = std::max(max_share, e.share);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(total_w) +
           "\" height=\"" + std::to_string(total_h) + "\">\n";
    svg += "  <rect width=\"" + std::to_string(total_w) + "\" height=\"" +
           std::to_string(total_h) + "\" fill=\"white\"/>\n";
    svg += svg_text(16, 24,
                    "feature importance (gain share > " + fmt_double_exact(report.threshold) + ")");
    if (report.entries.empty()) {
        svg += svg_text(16, margin_t + 14, "no features above threshold");
    } else {
        for (int i = 0; i < n; ++i) {
            const auto& e = report.entries[static_cast<std::size_t>(i)];
            const int y = margin_t + i * (bar_h + gap);
            const int w = max_share > 0.0
                              ? std::max(1, static_cast<int>(std::lround(
                                                bar_max_w * (e.share / max_share))))
                              : 1;
            svg += svg_text(8, y + bar_h - 5, e.feature);
            svg += "  <rect x=\"" + std::to_string(margin_l) + "\" y=\"" + std::to_string(y) +
                   "\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(bar_h) +
                   "\" fill=\"#2f7d4f\"/>\n";
            svg += svg_text(margin_l + w + 6, y + bar_h - 5, fmt_double(100.0 * e.share, 2) + "%");
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace slampoint::analysis
