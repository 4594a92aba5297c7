#pragma once

#include <string>
#include <utility>
#include <vector>

namespace latmix {

/// Minimal static line/scatter chart, enough to eyeball experiment output.
struct SvgSeries {
    std::string name;
    std::string color = "#1f6fb2";
    std::vector<std::pair<double, double>> points;
    bool draw_line = true;
};

struct SvgChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    int width = 640;
    int height = 440;
    std::vector<SvgSeries> series;
};

std::string render_svg_chart(const SvgChart& chart);

}  // namespace latmix
