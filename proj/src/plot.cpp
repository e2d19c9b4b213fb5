#include "swiptsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace swiptsim {

namespace {

constexpr int kWidth = 820;
constexpr int kHeight = 520;
constexpr int kLeft = 80, kRight = 30, kTop = 50, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("write_svg_plot: no series");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const PlotSeries& s : series) {
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw std::invalid_argument("write_svg_plot: series carry no points");
    if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }
    // pad the value axis so extremes stay inside the frame
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double v) { return kHeight - kBottom - (v - ymin) / (ymax - ymin) * plot_h; };

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write plot file '" + path + "'");
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"17\">" << title << "</text>\n";

    // frame and ticks
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << num(plot_w)
       << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        os << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
           << num(px(xv)) << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << num(px(xv)) << "\" y=\"" << kHeight - kBottom + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           << num(xv) << "</text>\n";
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << kLeft
           << "\" y2=\"" << num(py(yv)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << num(yv)
           << "</text>\n";
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << xlabel
       << "</text>\n";
    os << "<text x=\"20\" y=\"" << kHeight / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
          "transform=\"rotate(-90 20 " << kHeight / 2 << ")\">" << ylabel << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
        if (s.x.size() == 1) {
            os << "<circle cx=\"" << num(px(s.x[0])) << "\" cy=\"" << num(py(s.y[0]))
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) os << ' ';
                os << num(px(s.x[i])) << ',' << num(py(s.y[i]));
            }
            os << "\"/>\n";
        }
        const double ly = kTop + 18.0 + 18.0 * static_cast<double>(si);
        os << "<line x1=\"" << kLeft + 10 << "\" y1=\"" << num(ly - 4) << "\" x2=\""
           << kLeft + 34 << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kLeft + 40 << "\" y=\"" << num(ly)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace swiptsim
