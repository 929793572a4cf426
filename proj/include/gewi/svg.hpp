#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gewi {

enum class LineStyle { Solid, Dashed, Dotted };
enum class YAxis { Primary, Secondary };

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    LineStyle style = LineStyle::Solid;
    YAxis axis = YAxis::Primary;
};

// Static line plot written as a standalone SVG file. A secondary y axis is
// drawn on the right when any series uses it.
struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::string y2_label;
    std::vector<PlotSeries> series;
    int width = 760;
    int height = 480;

    std::string render() const;
    void write_file(const std::string& path) const;
};

// Cycled default palette.
std::string plot_color(std::size_t index);

} // namespace gewi
