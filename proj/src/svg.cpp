#include "greenscore/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace greenscore::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string open_svg(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
           "\" height=\"" + num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text_at(double x, double y, const std::string& content,
                    const std::string& extra = "") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" " + extra + ">" +
           escape(content) + "</text>\n";
}

struct Scale {
    double lo, hi, from, to;
    double operator()(double v) const {
        if (hi == lo) return (from + to) / 2.0;
        return from + (v - lo) / (hi - lo) * (to - from);
    }
};

std::string axes(const Scale& x, const Scale& y, const std::string& x_label,
                 const std::string& y_label, const std::vector<double>& x_ticks,
                 const std::vector<double>& y_ticks) {
    std::string out;
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(kHeight - kBottom) +
           "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
    for (double t : x_ticks) {
        double px = x(t);
        out += "<line x1=\"" + num(px) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
               num(px) + "\" y2=\"" + num(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
        out += text_at(px - 12, kHeight - kBottom + 20, tick(t));
    }
    for (double t : y_ticks) {
        double py = y(t);
        out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py) + "\" x2=\"" +
               num(kLeft) + "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
        out += text_at(kLeft - 45, py + 4, tick(t));
    }
    out += text_at(kWidth / 2 - 20, kHeight - 15, x_label);
    out += text_at(15, kTop - 10, y_label);
    return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    std::vector<double> ticks;
    if (hi <= lo) {
        ticks.push_back(lo);
        return ticks;
    }
    double raw_step = (hi - lo) / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw_step) {
            step = mag * m;
            break;
        }
    }
    double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
    return ticks;
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const LineChartOptions& options) {
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    bool any = false;
    for (const auto& s : series) {
        for (const auto& [px, py] : s.points) {
            if (!any) {
                x_lo = x_hi = px;
                y_lo = y_hi = py;
                any = true;
            }
            x_lo = std::min(x_lo, px);
            x_hi = std::max(x_hi, px);
            y_lo = std::min(y_lo, py);
            y_hi = std::max(y_hi, py);
        }
    }
    if (options.y_range) {
        y_lo = options.y_range->first;
        y_hi = options.y_range->second;
    } else if (y_lo == y_hi) {
        y_lo -= 1;
        y_hi += 1;
    }
    if (x_lo == x_hi) {
        x_lo -= 1;
        x_hi += 1;
    }

    Scale x{x_lo, x_hi, kLeft + 10, kWidth - kRight - 10};
    Scale y{y_lo, y_hi, kHeight - kBottom, kTop};

    std::string out = open_svg(kWidth, kHeight);
    out += text_at(kLeft, 25, options.title, "font-size=\"15\" font-weight=\"bold\"");
    if (options.band_half_width) {
        double half = *options.band_half_width;
        double top = y(std::min(half, y_hi));
        double bottom = y(std::max(-half, y_lo));
        out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(top) + "\" width=\"" +
               num(kWidth - kLeft - kRight) + "\" height=\"" + num(bottom - top) +
               "\" fill=\"#d9d9d9\"/>\n";
    }
    out += axes(x, y, options.x_label, options.y_label, nice_ticks(x_lo, x_hi),
                nice_ticks(y_lo, y_hi));

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        std::string points;
        for (const auto& [px, py] : series[i].points) {
            if (!points.empty()) points += ' ';
            points += num(x(px)) + "," + num(y(py));
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        for (const auto& [px, py] : series[i].points)
            out += "<circle cx=\"" + num(x(px)) + "\" cy=\"" + num(y(py)) +
                   "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        // legend
        double ly = kTop + 16.0 * static_cast<double>(i);
        out += "<rect x=\"" + num(kWidth - kRight - 170) + "\" y=\"" + num(ly) +
               "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        out += text_at(kWidth - kRight - 155, ly + 9, series[i].label);
    }
    out += "</svg>\n";
    return out;
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values, const std::string& y_label) {
    double y_lo = 0, y_hi = 0;
    for (double v : values) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
    }
    if (y_hi == y_lo) y_hi = y_lo + 1;
    Scale y{y_lo, y_hi, kHeight - kBottom, kTop};

    std::string out = open_svg(kWidth, kHeight);
    out += text_at(kLeft, 25, title, "font-size=\"15\" font-weight=\"bold\"");
    double plot_width = kWidth - kLeft - kRight;
    double slot = plot_width / std::max<std::size_t>(1, values.size());
    double bar_width = slot * 0.6;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        double y0 = y(std::max(0.0, y_lo));
        double y1 = y(values[i]);
        double top = std::min(y0, y1);
        double height = std::fabs(y0 - y1);
        out += "<rect x=\"" + num(cx - bar_width / 2) + "\" y=\"" + num(top) +
               "\" width=\"" + num(bar_width) + "\" height=\"" + num(height) +
               "\" fill=\"" + kPalette[0] + "\"/>\n";
        out += text_at(cx - 14, kHeight - kBottom + 20, labels[i]);
        out += text_at(cx - 14, top - 5, tick(values[i]));
    }
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(kHeight - kBottom) +
           "\" stroke=\"black\"/>\n";
    out += text_at(15, kTop - 10, y_label);
    out += "</svg>\n";
    return out;
}

std::string heatmap(const std::string& title, const std::vector<std::string>& labels,
                    const std::vector<std::vector<std::optional<double>>>& cells) {
    const std::size_t n = labels.size();
    const double cell = std::min(46.0, 360.0 / std::max<std::size_t>(1, n));
    const double grid_left = 190.0, grid_top = 70.0;
    double width = grid_left + cell * static_cast<double>(n) + 40;
    double height = grid_top + cell * static_cast<double>(n) + 40;

    std::string out = open_svg(width, height);
    out += text_at(20, 25, title, "font-size=\"15\" font-weight=\"bold\"");
    for (std::size_t i = 0; i < n; ++i) {
        out += text_at(10, grid_top + cell * (static_cast<double>(i) + 0.65), labels[i]);
        out += text_at(grid_left + cell * (static_cast<double>(i) + 0.1), grid_top - 8,
                       std::to_string(i + 1));
        out += text_at(10 + 160, grid_top + cell * (static_cast<double>(i) + 0.65),
                       "(" + std::to_string(i + 1) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double px = grid_left + cell * static_cast<double>(j);
            double py = grid_top + cell * static_cast<double>(i);
            std::string fill = "#bbbbbb";
            std::string label = "n/a";
            if (cells[i][j]) {
                double v = std::clamp(*cells[i][j], -1.0, 1.0);
                // blue (-1) .. white (0) .. red (+1)
                int r = static_cast<int>(255 * (v > 0 ? 1.0 : 1.0 + v));
                int b = static_cast<int>(255 * (v < 0 ? 1.0 : 1.0 - v));
                int g = static_cast<int>(255 * (1.0 - std::fabs(v)));
                char color[16];
                std::snprintf(color, sizeof(color), "#%02x%02x%02x", r, g, b);
                fill = color;
                char value[16];
                std::snprintf(value, sizeof(value), "%.2f", v);
                label = value;
            }
            out += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(cell) +
                   "\" height=\"" + num(cell) + "\" fill=\"" + fill +
                   "\" stroke=\"white\"/>\n";
            out += text_at(px + 4, py + cell * 0.6, label, "font-size=\"10\"");
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace greenscore::svg
