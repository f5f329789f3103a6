#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "levelea/bounds.hpp"
#include "levelea/simulator.hpp"

namespace levelea {

namespace detail {
inline std::string format_compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
}  // namespace detail

/// Long format: one row per (t, level), columns (t, j, value, kind).
inline std::string trajectory_to_csv(const BoundTrajectory& traj) {
    std::ostringstream out;
    out << "t,j,value,kind\n";
    const char* kind = to_string(traj.kind);
    for (int t = 0; t <= traj.t_max(); ++t) {
        const auto& row = traj.at(t);
        for (std::size_t j = 0; j < row.size(); ++j)
            out << t << ',' << (j + 1) << ',' << detail::format_compact(row[j]) << ',' << kind
                << '\n';
    }
    return out.str();
}

/// One row per run: (run_id, t, indicator, hit_time) with the indicator taken
/// at the requested level; the seed goes into the header comment.
inline std::string run_statistics_to_csv(const std::vector<RunStatistics>& runs, int level,
                                         std::uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << " level=" << level << '\n';
    out << "run_id,t,indicator,hit_time\n";
    for (const auto& r : runs) {
        for (std::size_t t = 0; t < r.first_level.size(); ++t)
            out << r.run_index << ',' << t << ',' << (r.first_level[t] >= level ? 1 : 0) << ','
                << r.hit_iteration << '\n';
    }
    return out.str();
}

struct SeriesRow {
    std::string preset;
    int lambda = 0;
    int s = 0;
    int t = 0;
    std::string series;
    double value = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    bool has_ci = false;
};

namespace detail {
// label cells must not collide with the field separator
inline std::string csv_safe(std::string s) {
    for (auto& c : s)
        if (c == ',') c = ';';
    return s;
}
}  // namespace detail

/// Merged experiment table: (preset, lambda, s, t, series, value, ci_lo, ci_hi);
/// bound series carry empty interval cells. Commas inside label cells are
/// replaced with semicolons.
inline std::string series_to_csv(const std::vector<SeriesRow>& rows) {
    std::ostringstream out;
    out << "preset,lambda,s,t,series,value,ci_lo,ci_hi\n";
    for (const auto& r : rows) {
        out << detail::csv_safe(r.preset) << ',' << r.lambda << ',' << r.s << ',' << r.t << ','
            << detail::csv_safe(r.series) << ',' << detail::format_compact(r.value) << ',';
        if (r.has_ci)
            out << detail::format_compact(r.ci_lo) << ',' << detail::format_compact(r.ci_hi);
        else
            out << ',';
        out << '\n';
    }
    return out.str();
}

inline std::vector<SeriesRow> series_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<SeriesRow> rows;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        SeriesRow r;
        std::getline(ls, r.preset, ',');
        std::getline(ls, cell, ',');
        r.lambda = std::stoi(cell);
        std::getline(ls, cell, ',');
        r.s = std::stoi(cell);
        std::getline(ls, cell, ',');
        r.t = std::stoi(cell);
        std::getline(ls, r.series, ',');
        std::getline(ls, cell, ',');
        r.value = std::stod(cell);
        std::string lo, hi;
        std::getline(ls, lo, ',');
        std::getline(ls, hi, ',');
        if (!lo.empty() && !hi.empty()) {
            r.ci_lo = std::stod(lo);
            r.ci_hi = std::stod(hi);
            r.has_ci = true;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace levelea
