#include "svg.hpp"

#include <algorithm>
#include <cmath>

#include "ppcf/csv.hpp"

namespace ppcf::cli {
namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 70, kRight = 160, kTop = 48, kBottom = 56;

std::string attr(double v) { return format_g9(std::round(v * 100.0) / 100.0); }

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (first) {
                xmin = xmax = s.xs[i];
                ymin = ymax = s.ys[i];
                first = false;
            }
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    ymin = std::min(ymin, 0.0);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto py = [&](double y) { return kTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + attr(kWidth) + "\" height=\"" +
           attr(kHeight) + "\" viewBox=\"0 0 " + attr(kWidth) + " " + attr(kHeight) + "\">\n";
    out += "<rect width=\"" + attr(kWidth) + "\" height=\"" + attr(kHeight) +
           "\" fill=\"white\"/>\n";
    out += "<text x=\"" + attr(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

    // axes
    out += "<line x1=\"" + attr(kLeft) + "\" y1=\"" + attr(kTop) + "\" x2=\"" + attr(kLeft) +
           "\" y2=\"" + attr(kTop + plot_h) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + attr(kLeft) + "\" y1=\"" + attr(kTop + plot_h) + "\" x2=\"" +
           attr(kLeft + plot_w) + "\" y2=\"" + attr(kTop + plot_h) + "\" stroke=\"black\"/>\n";

    // ticks
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        out += "<text x=\"" + attr(px(fx)) + "\" y=\"" + attr(kTop + plot_h + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_g9(std::round(fx * 1000.0) / 1000.0) + "</text>\n";
        out += "<text x=\"" + attr(kLeft - 8) + "\" y=\"" + attr(py(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_g9(std::round(fy * 1000.0) / 1000.0) + "</text>\n";
        out += "<line x1=\"" + attr(kLeft) + "\" y1=\"" + attr(py(fy)) + "\" x2=\"" +
               attr(kLeft + plot_w) + "\" y2=\"" + attr(py(fy)) +
               "\" stroke=\"lightgray\" stroke-dasharray=\"3,3\"/>\n";
    }

    out += "<text x=\"" + attr(kLeft + plot_w / 2) + "\" y=\"" + attr(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + attr(kTop + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + attr(kTop + plot_h / 2) + ")\">" + y_label +
           "</text>\n";

    // series + legend
    double legend_y = kTop + 10;
    for (const Series& s : series) {
        std::string points;
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (i) points += ' ';
            points += attr(px(s.xs[i])) + "," + attr(py(s.ys[i]));
        }
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"2\" points=\"" +
               points + "\"/>\n";
        const double lx = kLeft + plot_w + 14;
        out += "<line x1=\"" + attr(lx) + "\" y1=\"" + attr(legend_y) + "\" x2=\"" +
               attr(lx + 22) + "\" y2=\"" + attr(legend_y) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + attr(lx + 28) + "\" y=\"" + attr(legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
        legend_y += 18;
    }

    out += "</svg>\n";
    return out;
}

}  // namespace ppcf::cli
