#ifndef OE_SVG_HPP
#define OE_SVG_HPP

#include <string>
#include <vector>

namespace oe::cli {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

// Self-contained SVG line plot (axes, ticks, legend); points with
// non-finite y are skipped.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                       const std::string& y_label, int width = 860, int height = 520);

} // namespace oe::cli

#endif
