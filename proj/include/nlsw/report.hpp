#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsw {

/// Fixed-format scientific rendering so identical runs produce byte-identical
/// CSV output.
inline std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open for writing: " + path);
        for (size_t i = 0; i < header.size(); ++i)
            out << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
};

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Minimal native SVG line chart; log axes for convergence plots, linear for
/// energy traces.
inline void write_line_chart_svg(const std::string& path, const std::string& title,
                                 const std::string& xlabel, const std::string& ylabel,
                                 const std::vector<PlotSeries>& series, bool logx, bool logy) {
    const int width = 640, height = 480;
    const int ml = 70, mr = 20, mt = 40, mb = 50;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    auto tx = [logx](double v) { return logx ? std::log10(v) : v; };
    auto ty = [logy](double v) { return logy ? std::log10(v) : v; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            if (logx && x <= 0) continue;
            if (logy && y <= 0) continue;
            xmin = std::min(xmin, tx(x)); xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, ty(y)); ymax = std::max(ymax, ty(y));
        }
    }
    if (xmin > xmax) { xmin = 0; xmax = 1; }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }

    auto px = [&](double x) { return ml + (tx(x) - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (ty(y) - ymin) / (ymax - ymin) * (height - mt - mb); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    out << "<text x='" << width / 2 << "' y='" << height - 10
        << "' text-anchor='middle' font-size='13'>" << xlabel << "</text>\n";
    out << "<text x='16' y='" << height / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 "
        << height / 2 << ")'>" << ylabel << "</text>\n";
    // frame + gridlines
    out << "<rect x='" << ml << "' y='" << mt << "' width='" << width - ml - mr << "' height='"
        << height - mt - mb << "' fill='none' stroke='black'/>\n";
    const int nticks = 5;
    char buf[64];
    for (int k = 0; k <= nticks; ++k) {
        double fx = xmin + (xmax - xmin) * k / nticks;
        double fy = ymin + (ymax - ymin) * k / nticks;
        double vx = logx ? std::pow(10.0, fx) : fx;
        double vy = logy ? std::pow(10.0, fy) : fy;
        double sx = ml + (width - ml - mr) * static_cast<double>(k) / nticks;
        double sy = height - mb - (height - mt - mb) * static_cast<double>(k) / nticks;
        std::snprintf(buf, sizeof(buf), "%.3g", vx);
        out << "<text x='" << sx << "' y='" << height - mb + 18
            << "' text-anchor='middle' font-size='11'>" << buf << "</text>\n";
        std::snprintf(buf, sizeof(buf), "%.3g", vy);
        out << "<text x='" << ml - 6 << "' y='" << sy + 4
            << "' text-anchor='end' font-size='11'>" << buf << "</text>\n";
        out << "<line x1='" << sx << "' y1='" << mt << "' x2='" << sx << "' y2='" << height - mb
            << "' stroke='#dddddd'/>\n";
        out << "<line x1='" << ml << "' y1='" << sy << "' x2='" << width - mr << "' y2='" << sy
            << "' stroke='#dddddd'/>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        const char* color = colors[ci % 6];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (auto [x, y] : s.points) out << px(x) << ',' << py(y) << ' ';
        out << "'/>\n";
        for (auto [x, y] : s.points)
            out << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='3' fill='" << color
                << "'/>\n";
        out << "<text x='" << width - mr - 8 << "' y='" << mt + 18 + 16 * ci
            << "' text-anchor='end' font-size='12' fill='" << color << "'>" << s.name
            << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

} // namespace nlsw
