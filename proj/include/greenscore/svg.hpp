#pragma once

#include <optional>
#include <string>
#include <vector>

namespace greenscore::svg {

/// Minimal static chart rendering. Output is a pure function of the inputs
/// (fixed-precision coordinates, no timestamps), so reruns emit identical
/// bytes.

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), x ascending
};

struct LineChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::optional<std::pair<double, double>> y_range;
    /// When set, shades the horizontal band |y| <= band_half_width grey.
    std::optional<double> band_half_width;
};

std::string line_chart(const std::vector<Series>& series, const LineChartOptions& options);

std::string bar_chart(const std::string& title, const std::vector<std::string>& labels,
                      const std::vector<double>& values, const std::string& y_label);

/// Symmetric matrix heatmap; missing cells render hatched grey with "n/a".
std::string heatmap(const std::string& title, const std::vector<std::string>& labels,
                    const std::vector<std::vector<std::optional<double>>>& cells);

}  // namespace greenscore::svg
