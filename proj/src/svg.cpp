#include "oe/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace oe::cli {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                         "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                       const std::string& y_label, int width, int height) {
    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin < xmax)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (!(ymin < ymax)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    double ypad = 0.06 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double ml = 70, mr = 20, mt = 18, mb = 48;
    double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) + "\" height=\"" +
           fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
        double xv = xmin + k * (xmax - xmin) / 5, yv = ymin + k * (ymax - ymin) / 5;
        out += "<line x1=\"" + fmt(px(xv)) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(px(xv)) +
               "\" y2=\"" + fmt(mt + ph + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(mt + ph + 18) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(xv) + "</text>\n";
        out += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(py(yv)) + "\" x2=\"" + fmt(ml) +
               "\" y2=\"" + fmt(py(yv)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(py(yv) + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + fmt(yv) + "</text>\n";
    }
    out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(double(height) - 8) +
           "\" font-size=\"13\" text-anchor=\"middle\">" + x_label + "</text>\n";
    out += "<text x=\"16\" y=\"" + fmt(mt + ph / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fmt(mt + ph / 2) + ")\">" + y_label + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(kColors[si % 8]) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        double lx = ml + pw - 150, ly = mt + 16 + 16 * si;
        out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(lx + 24) +
               "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + kColors[si % 8] +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly) + "\" font-size=\"11\">" + s.label +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace oe::cli
