#pragma once

#include <string>
#include <vector>

namespace sdwsn {

/// Minimal static SVG 1.1 charts: labelled line plots and bar charts.
/// One series per call entry; axes are linear with simple tick labels.

struct Series {
  std::string label;
  std::vector<double> y;  // x is the 0-based index
  std::string color = "#1f6fb2";
};

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series);

struct BarGroup {
  std::string label;
  double value = 0.0;
  std::string color = "#1f6fb2";
};

void write_bar_svg(const std::string& path, const std::string& title,
                   const std::string& y_label, const std::vector<BarGroup>& bars);

}  // namespace sdwsn
