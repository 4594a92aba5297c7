#include "latmix/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace latmix {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

}  // namespace

std::string render_svg_chart(const SvgChart& chart) {
    const double left = 70, right = 20, top = 40, bottom = 55;
    const double plot_w = chart.width - left - right;
    const double plot_h = chart.height - top - bottom;

    Range xr, yr;
    for (const auto& s : chart.series) {
        for (const auto& [x, y] : s.points) {
            xr.add(x);
            yr.add(chart.log_y ? std::log10(std::max(y, 1e-300)) : y);
        }
    }
    if (!std::isfinite(xr.lo)) {
        xr = {0.0, 1.0};
        yr = {0.0, 1.0};
    }
    xr.pad();
    yr.pad();

    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) {
        const double v = chart.log_y ? std::log10(std::max(y, 1e-300)) : y;
        return top + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
        << chart.height << "\" viewBox=\"0 0 " << chart.width << " " << chart.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << chart.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << chart.title << "</text>\n";

    // axes
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double tx = xr.lo + (xr.hi - xr.lo) * i / ticks;
        const double ty = yr.lo + (yr.hi - yr.lo) * i / ticks;
        const double x = px(tx);
        const double y = top + plot_h - plot_h * i / ticks;
        out << "<line x1=\"" << x << "\" y1=\"" << top + plot_h << "\" x2=\"" << x << "\" y2=\""
            << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << top + plot_h + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(tx)
            << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << (chart.log_y ? "1e" + fmt(ty) : fmt(ty)) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << chart.height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << chart.x_label
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">" << chart.y_label
        << "</text>\n";

    int legend_row = 0;
    for (const auto& s : chart.series) {
        if (s.draw_line && s.points.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : s.points) out << px(x) << "," << py(y) << " ";
            out << "\"/>\n";
        }
        for (const auto& [x, y] : s.points) {
            out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << s.color
                << "\"/>\n";
        }
        if (!s.name.empty()) {
            const double ly = top + 14 + 16 * legend_row++;
            out << "<circle cx=\"" << left + plot_w - 130 << "\" cy=\"" << ly - 4 << "\" r=\"4\" fill=\""
                << s.color << "\"/>\n";
            out << "<text x=\"" << left + plot_w - 120 << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace latmix
