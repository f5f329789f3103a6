#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "levelea/csv.hpp"

namespace levelea {

struct PlotSpec {
    std::string title;
    std::string x_label = "t";
    std::string y_label = "proportion";
    int width = 860;
    int height = 520;
};

namespace detail {

inline std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

}  // namespace detail

/// Static line plot of the merged experiment table. Pure function of the CSV
/// text: rendering the same table twice yields byte-identical SVG. Series
/// with interval columns are drawn with a shaded band.
inline std::string svg_from_series_csv(const std::string& csv_text, const PlotSpec& spec = {}) {
    const auto rows = series_from_csv(csv_text);
    // stable series order: first appearance in the file
    std::vector<std::string> order;
    std::map<std::string, std::vector<const SeriesRow*>> by_series;
    for (const auto& r : rows) {
        if (!by_series.count(r.series)) order.push_back(r.series);
        by_series[r.series].push_back(&r);
    }

    double t_min = 1e300, t_max = -1e300, v_min = 0.0, v_max = -1e300;
    for (const auto& r : rows) {
        t_min = std::min(t_min, static_cast<double>(r.t));
        t_max = std::max(t_max, static_cast<double>(r.t));
        v_max = std::max(v_max, r.has_ci ? r.ci_hi : r.value);
    }
    if (rows.empty()) {
        t_min = 0.0;
        t_max = 1.0;
        v_max = 1.0;
    }
    v_max = std::max(v_max, 1e-9);
    if (t_max <= t_min) t_max = t_min + 1.0;
    v_max = std::min(1.05, v_max * 1.05);

    const double ml = 64, mr = 16, mt = 34, mb = 46;
    const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
    const auto sx = [&](double t) { return ml + pw * (t - t_min) / (t_max - t_min); };
    const auto sy = [&](double v) { return mt + ph * (1.0 - (v - v_min) / (v_max - v_min)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << spec.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << spec.title << "</text>\n";

    // axes and ticks
    svg << "<g stroke=\"#333\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << detail::fmt_coord(ml) << "\" y1=\"" << detail::fmt_coord(mt + ph)
        << "\" x2=\"" << detail::fmt_coord(ml + pw) << "\" y2=\"" << detail::fmt_coord(mt + ph)
        << "\"/>\n";
    svg << "<line x1=\"" << detail::fmt_coord(ml) << "\" y1=\"" << detail::fmt_coord(mt)
        << "\" x2=\"" << detail::fmt_coord(ml) << "\" y2=\"" << detail::fmt_coord(mt + ph)
        << "\"/>\n";
    svg << "</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double tv = t_min + (t_max - t_min) * k / 5.0;
        const double vv = v_min + (v_max - v_min) * k / 5.0;
        svg << "<text x=\"" << detail::fmt_coord(sx(tv)) << "\" y=\""
            << detail::fmt_coord(mt + ph + 16) << "\" text-anchor=\"middle\">"
            << detail::fmt_tick(std::round(tv)) << "</text>\n";
        svg << "<text x=\"" << detail::fmt_coord(ml - 8) << "\" y=\""
            << detail::fmt_coord(sy(vv) + 4) << "\" text-anchor=\"end\">" << detail::fmt_tick(vv)
            << "</text>\n";
        svg << "<line x1=\"" << detail::fmt_coord(ml) << "\" y1=\"" << detail::fmt_coord(sy(vv))
            << "\" x2=\"" << detail::fmt_coord(ml + pw) << "\" y2=\"" << detail::fmt_coord(sy(vv))
            << "\" stroke=\"#eee\"/>\n";
    }
    svg << "<text x=\"" << spec.width / 2 << "\" y=\"" << spec.height - 8
        << "\" text-anchor=\"middle\">" << spec.x_label << "</text>\n";
    svg << "<text x=\"14\" y=\"" << spec.height / 2 << "\" text-anchor=\"middle\" transform=\""
        << "rotate(-90 14 " << spec.height / 2 << ")\">" << spec.y_label << "</text>\n";
    svg << "</g>\n";

    int color = 0;
    for (const auto& name : order) {
        auto pts = by_series[name];
        std::sort(pts.begin(), pts.end(),
                  [](const SeriesRow* a, const SeriesRow* b) { return a->t < b->t; });
        const char* stroke = detail::kPalette[color % 10];
        ++color;

        bool any_ci = false;
        for (const auto* p : pts) any_ci |= p->has_ci;
        if (any_ci) {
            svg << "<path fill=\"" << stroke << "\" fill-opacity=\"0.15\" stroke=\"none\" d=\"";
            bool first = true;
            for (const auto* p : pts) {
                svg << (first ? 'M' : 'L') << detail::fmt_coord(sx(p->t)) << ' '
                    << detail::fmt_coord(sy(p->has_ci ? p->ci_hi : p->value));
                first = false;
            }
            for (auto it = pts.rbegin(); it != pts.rend(); ++it)
                svg << 'L' << detail::fmt_coord(sx((*it)->t)) << ' '
                    << detail::fmt_coord(sy((*it)->has_ci ? (*it)->ci_lo : (*it)->value));
            svg << "Z\"/>\n";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.6\""
            << (any_ci ? " stroke-dasharray=\"5 3\"" : "") << " points=\"";
        for (const auto* p : pts)
            svg << detail::fmt_coord(sx(p->t)) << ',' << detail::fmt_coord(sy(p->value)) << ' ';
        svg << "\"/>\n";
    }

    // legend
    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    double ly = mt + 10;
    color = 0;
    for (const auto& name : order) {
        const char* stroke = detail::kPalette[color % 10];
        ++color;
        svg << "<line x1=\"" << detail::fmt_coord(ml + pw - 170) << "\" y1=\""
            << detail::fmt_coord(ly - 4) << "\" x2=\"" << detail::fmt_coord(ml + pw - 146)
            << "\" y2=\"" << detail::fmt_coord(ly - 4) << "\" stroke=\"" << stroke
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << detail::fmt_coord(ml + pw - 140) << "\" y=\""
            << detail::fmt_coord(ly) << "\">" << name << "</text>\n";
        ly += 16;
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace levelea
