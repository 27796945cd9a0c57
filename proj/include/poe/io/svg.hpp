#pragma once

// Static SVG plots: deterministic text output (no timestamps, fixed
// formatting), diffable in CI.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace poe::io {

struct SvgSeries {
    std::string label;
    std::string color = "#1f4e8c";
    bool line = false;    // polyline through the points
    bool marker = true;   // circle per point
    std::vector<std::pair<double, double>> points;
};

struct SvgPanel {
    std::string title;
    std::string x_label = "n";
    std::string y_label;
    std::string annotation;  // drawn under the title
    std::vector<SvgSeries> series;
};

namespace detail {

inline std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string fmt_tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

}  // namespace detail

inline constexpr int kSvgWidth = 640;
inline constexpr int kSvgPanelHeight = 360;

/// Render stacked panels into one SVG document. Returns false (writes
/// nothing) if no panel has any point.
inline bool write_svg(std::ostream& out, const std::vector<SvgPanel>& panels) {
    using detail::fmt2;
    using detail::fmt_tick;
    bool any = false;
    for (const auto& p : panels)
        for (const auto& s : p.series)
            if (!s.points.empty()) any = true;
    if (!any) return false;

    const int height = kSvgPanelHeight * static_cast<int>(panels.size());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgWidth
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << kSvgWidth << ' '
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const double ml = 72, mr = 24, mt = 46, mb = 46;
    int panel_index = 0;
    for (const auto& panel : panels) {
        const double top = panel_index * kSvgPanelHeight;
        const double x0 = ml, x1 = kSvgWidth - mr;
        const double y0 = top + mt, y1 = top + kSvgPanelHeight - mb;

        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto& s : panel.series)
            for (const auto& [x, y] : s.points) {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        if (!(xmin < xmax)) { xmin -= 0.5; xmax += 0.5; }
        if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
        const double ypad = 0.05 * (ymax - ymin);
        ymin -= ypad;
        ymax += ypad;

        const auto px = [&](double x) {
            return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0);
        };
        const auto py = [&](double y) {
            return y1 - (y - ymin) / (ymax - ymin) * (y1 - y0);
        };

        out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
        out << "<text x=\"" << fmt2((x0 + x1) / 2) << "\" y=\"" << fmt2(top + 18)
            << "\" text-anchor=\"middle\" font-size=\"14\">" << panel.title
            << "</text>\n";
        if (!panel.annotation.empty())
            out << "<text x=\"" << fmt2((x0 + x1) / 2) << "\" y=\""
                << fmt2(top + 34) << "\" text-anchor=\"middle\" fill=\"#555555\">"
                << panel.annotation << "</text>\n";

        // frame and ticks
        out << "<rect x=\"" << fmt2(x0) << "\" y=\"" << fmt2(y0) << "\" width=\""
            << fmt2(x1 - x0) << "\" height=\"" << fmt2(y1 - y0)
            << "\" fill=\"none\" stroke=\"#333333\"/>\n";
        constexpr int kTicks = 5;
        for (int i = 0; i <= kTicks; ++i) {
            const double fx = xmin + (xmax - xmin) * i / kTicks;
            const double fy = ymin + (ymax - ymin) * i / kTicks;
            out << "<line x1=\"" << fmt2(px(fx)) << "\" y1=\"" << fmt2(y1)
                << "\" x2=\"" << fmt2(px(fx)) << "\" y2=\"" << fmt2(y1 + 5)
                << "\" stroke=\"#333333\"/>\n";
            out << "<text x=\"" << fmt2(px(fx)) << "\" y=\"" << fmt2(y1 + 18)
                << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
            out << "<line x1=\"" << fmt2(x0 - 5) << "\" y1=\"" << fmt2(py(fy))
                << "\" x2=\"" << fmt2(x0) << "\" y2=\"" << fmt2(py(fy))
                << "\" stroke=\"#333333\"/>\n";
            out << "<text x=\"" << fmt2(x0 - 8) << "\" y=\"" << fmt2(py(fy) + 4)
                << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
        }
        out << "<text x=\"" << fmt2((x0 + x1) / 2) << "\" y=\""
            << fmt2(top + kSvgPanelHeight - 10) << "\" text-anchor=\"middle\">"
            << panel.x_label << "</text>\n";
        out << "<text x=\"16\" y=\"" << fmt2((y0 + y1) / 2)
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
            << fmt2((y0 + y1) / 2) << ")\">" << panel.y_label << "</text>\n";

        // legend — only when more than one labelled series
        int labelled = 0;
        for (const auto& s : panel.series)
            if (!s.label.empty()) ++labelled;
        double legend_y = y0 + 14;
        for (const auto& s : panel.series) {
            if (labelled > 1 && !s.label.empty()) {
                out << "<circle cx=\"" << fmt2(x1 - 120) << "\" cy=\""
                    << fmt2(legend_y - 4) << "\" r=\"3\" fill=\"" << s.color
                    << "\"/>\n";
                out << "<text x=\"" << fmt2(x1 - 112) << "\" y=\"" << fmt2(legend_y)
                    << "\">" << s.label << "</text>\n";
                legend_y += 16;
            }
            if (s.points.empty()) continue;
            if (s.line) {
                out << "<polyline fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.5\" points=\"";
                for (const auto& [x, y] : s.points)
                    out << fmt2(px(x)) << ',' << fmt2(py(y)) << ' ';
                out << "\"/>\n";
            }
            if (s.marker)
                for (const auto& [x, y] : s.points)
                    out << "<circle cx=\"" << fmt2(px(x)) << "\" cy=\""
                        << fmt2(py(y)) << "\" r=\"3\" fill=\"" << s.color
                        << "\"/>\n";
        }
        out << "</g>\n";
        ++panel_index;
    }
    out << "</svg>\n";
    return true;
}

}  // namespace poe::io
