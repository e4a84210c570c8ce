#pragma once

#include <string>
#include <vector>

namespace revmix {

// Minimal static line plot: one polyline per series on a shared linear axis
// box, with series labels in the top-right corner.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x, y;
};

std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series, int width = 720,
                             int height = 440);

}  // namespace revmix
