#ifndef FST_TOOLS_SVG_HPP
#define FST_TOOLS_SVG_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fst::cli {

struct Series {
    std::string label;
    std::string color = "#1f6fb2";
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    bool log_y = false;
    int width = 960;
    int height = 600;
};

/// Static SVG line plot: axes, ticks, legend, one polyline per series.
void write_svg_plot(std::ostream& os, const PlotSpec& spec,
                    const std::vector<Series>& series);

}  // namespace fst::cli

#endif
