#ifndef LTLAB_REPORT_HPP
#define LTLAB_REPORT_HPP

#include <ostream>
#include <string>
#include <vector>

// CSV / SVG emission: '#'-prefixed metadata lines, LF endings, every numeric
// printed with full round-trip precision so repeated runs are byte-identical.

namespace ltlab::report {

std::string num(double v);
std::string num(long v);
std::string num(unsigned long long v);

class Csv {
public:
    explicit Csv(std::ostream& os) : os_(os) {}
    void meta(const std::string& line);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
};

struct SvgSeries {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    std::string label;
};

// static scatter/line plot; data must already be present in the CSV record
void write_svg_scatter(std::ostream& os, const std::vector<SvgSeries>& series,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, bool log_x = false, bool log_y = false);

}  // namespace ltlab::report

#endif
