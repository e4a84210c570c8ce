#include "revmix/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "revmix/csv.hpp"

namespace revmix {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

}  // namespace

std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series, int width,
                             int height) {
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    auto sx = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto sy = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    os << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
       << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        double fx = xmin + (xmax - xmin) * k / 4.0;
        double fy = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(mt + ph + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << format_double(fx) << "</text>\n";
        os << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(sy(fy) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << format_double(fy) << "</text>\n";
    }
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 16 " << height / 2 << ")\">" << y_label << "</text>\n";

    int li = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << num(sx(s.x[i])) << "," << num(sy(s.y[i])) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << num(width - mr - 8) << "\" y=\"" << num(mt + 16 + 16 * li)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
           << s.color << "\">" << s.label << "</text>\n";
        ++li;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace revmix
