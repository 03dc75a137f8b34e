#include "ltlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ltlab::report {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(long v) { return std::to_string(v); }
std::string num(unsigned long long v) { return std::to_string(v); }

void Csv::meta(const std::string& line) { os_ << "# " << line << "\n"; }

void Csv::header(const std::vector<std::string>& cols) {
    for (size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
    os_ << "\n";
}

void Csv::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
}

namespace {

double map_coord(double v, double lo, double hi, double out_lo, double out_hi, bool log_scale) {
    if (log_scale) {
        v = std::log10(std::max(v, 1e-300));
        lo = std::log10(std::max(lo, 1e-300));
        hi = std::log10(std::max(hi, 1e-300));
    }
    if (hi <= lo) return 0.5 * (out_lo + out_hi);
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
}

}  // namespace

void write_svg_scatter(std::ostream& os, const std::vector<SvgSeries>& series,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, bool log_x, bool log_y) {
    const double W = 820, H = 560, ml = 80, mr = 30, mt = 50, mb = 60;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (xlo > xhi) { xlo = 0; xhi = 1; ylo = 0; yhi = 1; }
    if (!log_x) { double p = 0.05 * (xhi - xlo + 1e-30); xlo -= p; xhi += p; }
    if (!log_y) { double p = 0.05 * (yhi - ylo + 1e-30); ylo -= p; yhi += p; }

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
       << H - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << 0.5 * W << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
       << title << "</text>\n";
    os << "<text x=\"" << 0.5 * W << "\" y=\"" << H - 18
       << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
    os << "<text x=\"22\" y=\"" << 0.5 * H
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 22 " << 0.5 * H
       << ")\">" << ylabel << "</text>\n";

    double ly = mt + 6;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.points.size(); ++i) {
            double px = map_coord(s.points[i].first, xlo, xhi, ml, W - mr, log_x);
            double py = map_coord(s.points[i].second, ylo, yhi, H - mb, mt, log_y);
            os << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3.5\" fill=\"" << s.color
               << "\"/>\n";
            if (i > 0) {
                double qx = map_coord(s.points[i - 1].first, xlo, xhi, ml, W - mr, log_x);
                double qy = map_coord(s.points[i - 1].second, ylo, yhi, H - mb, mt, log_y);
                os << "<line x1=\"" << qx << "\" y1=\"" << qy << "\" x2=\"" << px << "\" y2=\""
                   << py << "\" stroke=\"" << s.color << "\" stroke-width=\"1\"/>\n";
            }
        }
        if (!s.label.empty()) {
            os << "<text x=\"" << W - mr - 6 << "\" y=\"" << ly
               << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << s.color << "\">"
               << s.label << "</text>\n";
            ly += 16;
        }
    }
    os << "</svg>\n";
}

}  // namespace ltlab::report
