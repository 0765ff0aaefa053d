#include "peakcast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace peakcast::svg {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 45.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<LineSeries>& series) {
    if (series.empty()) throw std::invalid_argument("write_line_chart: no series");
    std::size_t n = 0;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const LineSeries& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            if (!std::isfinite(v)) throw std::invalid_argument("write_line_chart: non-finite value");
            if (first) {
                lo = hi = v;
                first = false;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (n == 0) throw std::invalid_argument("write_line_chart: empty series");
    if (hi == lo) {
        hi += 1.0;
        lo -= 1.0;
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto x_of = [&](std::size_t i) {
        return kMarginLeft + (n == 1 ? plot_w / 2
                                     : plot_w * static_cast<double>(i) /
                                           static_cast<double>(n - 1));
    };
    const auto y_of = [&](double v) {
        return kMarginTop + plot_h * (1.0 - (v - lo) / (hi - lo));
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_line_chart: cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes.
    out << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << kMarginLeft - 8 << "\" y=\"" << kMarginTop + 5
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(hi)
        << "</text>\n";
    out << "  <text x=\"" << kMarginLeft - 8 << "\" y=\"" << kMarginTop + plot_h
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lo)
        << "</text>\n";
    out << "  <text x=\"" << kMarginLeft << "\" y=\"" << kHeight - 12
        << "\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
    out << "  <text x=\"" << kMarginLeft + plot_w << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << (n - 1)
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].values.size(); ++i) {
            if (i) out << ' ';
            out << fmt(x_of(i)) << ',' << fmt(y_of(series[s].values[i]));
        }
        out << "\"/>\n";
        // Legend entry.
        const double ly = kMarginTop + 14.0 * static_cast<double>(s);
        out << "  <line x1=\"" << kMarginLeft + plot_w - 150 << "\" y1=\"" << ly << "\" x2=\""
            << kMarginLeft + plot_w - 130 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << kMarginLeft + plot_w - 124 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].name << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace peakcast::svg
