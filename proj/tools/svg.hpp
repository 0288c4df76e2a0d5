#pragma once

// Minimal SVG line-chart writer; enough for the refund-evolution figure.

#include <string>
#include <vector>

namespace ppcf::cli {

struct Series {
    std::string label;
    std::string color;
    std::vector<double> xs;
    std::vector<double> ys;
};

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series);

}  // namespace ppcf::cli
