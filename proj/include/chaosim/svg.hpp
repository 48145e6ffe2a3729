#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "chaosim/table.hpp"
#include "chaosim/util.hpp"

namespace chaosim {

namespace detail {

inline std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace detail

/// Standalone scatter plot: fixed 1200x800 viewport, axis lines with min/max
/// labels, one 1px square marker per row. Same table bytes in, same SVG
/// bytes out.
inline std::string svg_scatter_string(const Table& table, const std::string& x_column,
                                      const std::string& y_column) {
    constexpr double kWidth = 1200.0, kHeight = 800.0;
    constexpr double kLeft = 80.0, kRight = 20.0, kTop = 20.0, kBottom = 60.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    std::vector<double> xs = table.numeric_column(x_column);
    std::vector<double> ys = table.numeric_column(y_column);

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    if (!xs.empty()) {
        x_min = *std::min_element(xs.begin(), xs.end());
        x_max = *std::max_element(xs.begin(), xs.end());
        y_min = *std::min_element(ys.begin(), ys.end());
        y_max = *std::max_element(ys.begin(), ys.end());
    }
    if (x_min == x_max) { x_min -= 0.5; x_max += 0.5; }
    if (y_min == y_max) { y_min -= 0.5; y_max += 0.5; }

    auto map_x = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto map_y = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1200\" height=\"800\" "
           "viewBox=\"0 0 1200 800\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"1200\" height=\"800\" fill=\"white\"/>\n";
    // axes
    out += "<line x1=\"" + detail::svg_coord(kLeft) + "\" y1=\"" + detail::svg_coord(kTop) +
           "\" x2=\"" + detail::svg_coord(kLeft) + "\" y2=\"" +
           detail::svg_coord(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + detail::svg_coord(kLeft) + "\" y1=\"" +
           detail::svg_coord(kHeight - kBottom) + "\" x2=\"" + detail::svg_coord(kWidth - kRight) +
           "\" y2=\"" + detail::svg_coord(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
    // min/max labels
    auto text = [](double x, double y, const std::string& anchor, const std::string& body) {
        return "<text x=\"" + detail::svg_coord(x) + "\" y=\"" + detail::svg_coord(y) +
               "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"" + anchor + "\">" +
               body + "</text>\n";
    };
    out += text(kLeft, kHeight - kBottom + 20.0, "start", format_real_sig(x_min, 6));
    out += text(kWidth - kRight, kHeight - kBottom + 20.0, "end", format_real_sig(x_max, 6));
    out += text(kLeft - 6.0, kHeight - kBottom, "end", format_real_sig(y_min, 6));
    out += text(kLeft - 6.0, kTop + 12.0, "end", format_real_sig(y_max, 6));
    out += text(kWidth / 2.0, kHeight - kBottom + 40.0, "middle", x_column);
    out += text(kLeft - 6.0, kTop + 32.0, "end", y_column);
    // markers
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += "<rect x=\"" + detail::svg_coord(map_x(xs[i]) - 0.5) + "\" y=\"" +
               detail::svg_coord(map_y(ys[i]) - 0.5) +
               "\" width=\"1\" height=\"1\" fill=\"#1f4e9c\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

inline void emit_svg_scatter(const Table& table, const std::string& x_column,
                             const std::string& y_column, const std::string& path) {
    write_file_atomic(path, svg_scatter_string(table, x_column, y_column));
}

} // namespace chaosim
