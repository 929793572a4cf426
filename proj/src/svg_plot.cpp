#include "gewi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gewi/csv.hpp"

namespace gewi {

std::string plot_color(std::size_t index) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[index % 8];
}

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finalize() {
        if (!std::isfinite(lo)) { lo = 0.0; hi = 1.0; }
        if (hi - lo < 1e-12) { hi += 1.0; lo -= lo == 0.0 ? 0.0 : 1e-12; }
        const double pad = (hi - lo) * 0.05;
        lo -= pad;
        hi += pad;
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

// Rounded tick spacing: 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(const Range& r, int target = 6) {
    const double span = r.hi - r.lo;
    double step = std::pow(10.0, std::floor(std::log10(span / target)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * mult) <= target) { step *= mult; break; }
    }
    std::vector<double> ticks;
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + step * 1e-9; v += step)
        ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return ticks;
}

const char* dash_for(LineStyle s) {
    switch (s) {
        case LineStyle::Dashed: return "9,5";
        case LineStyle::Dotted: return "2,4";
        default: return "";
    }
}

std::string num(double v) { return format_double(v); }

} // namespace

std::string SvgPlot::render() const {
    const double ml = 62, mr = 62, mt = 40, mb = 52;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    Range xr, yr, y2r;
    bool has_secondary = false;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            xr.include(x);
            (s.axis == YAxis::Primary ? yr : y2r).include(y);
        }
        if (s.axis == YAxis::Secondary) has_secondary = true;
    }
    xr.finalize();
    yr.finalize();
    y2r.finalize();

    auto px = [&](double x) { return ml + xr.frac(x) * pw; };
    auto py = [&](double y) { return mt + (1.0 - yr.frac(y)) * ph; };
    auto py2 = [&](double y) { return mt + (1.0 - y2r.frac(y)) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2.0 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << title << "</text>\n";

    // grid + axis ticks
    for (double t : nice_ticks(xr)) {
        const double x = px(t);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << mt << "\" x2=\"" << num(x) << "\" y2=\""
            << mt + ph << "\" stroke=\"#e0e0e0\"/>\n"
            << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
            << "</text>\n";
    }
    for (double t : nice_ticks(yr)) {
        const double y = py(t);
        svg << "<line x1=\"" << ml << "\" y1=\"" << num(y) << "\" x2=\"" << ml + pw << "\" y2=\""
            << num(y) << "\" stroke=\"#e0e0e0\"/>\n"
            << "<text x=\"" << ml - 6 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
            << "</text>\n";
    }
    if (has_secondary) {
        for (double t : nice_ticks(y2r)) {
            svg << "<text x=\"" << ml + pw + 6 << "\" y=\"" << num(py2(t) + 4)
                << "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"11\">"
                << num(t) << "</text>\n";
        }
    }

    // frame
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << num(pw) << "\" height=\""
        << num(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // axis labels
    svg << "<text x=\"" << ml + pw / 2.0 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << "</text>\n"
        << "<text x=\"16\" y=\"" << mt + ph / 2.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 "
        << mt + ph / 2.0 << ")\">" << y_label << "</text>\n";
    if (has_secondary) {
        svg << "<text x=\"" << width - 14 << "\" y=\"" << mt + ph / 2.0
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "transform=\"rotate(90 "
            << width - 14 << " " << mt + ph / 2.0 << ")\">" << y2_label << "</text>\n";
    }

    // series
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        const char* dash = dash_for(s.style);
        if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
        svg << " points=\"";
        for (const auto& [x, y] : s.points) {
            svg << num(px(x)) << "," << num(s.axis == YAxis::Primary ? py(y) : py2(y)) << " ";
        }
        svg << "\"/>\n";
    }

    // legend
    double ly = mt + 10;
    for (const auto& s : series) {
        const double lx = ml + 12;
        svg << "<line x1=\"" << lx << "\" y1=\"" << num(ly) << "\" x2=\"" << lx + 26 << "\" y2=\""
            << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"";
        const char* dash = dash_for(s.style);
        if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
        svg << "/>\n<text x=\"" << lx + 32 << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name << "</text>\n";
        ly += 16;
    }

    svg << "</svg>\n";
    return svg.str();
}

void SvgPlot::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << render();
}

} // namespace gewi
