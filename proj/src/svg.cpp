#include "sdwsn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sdwsn/mat.hpp"

namespace sdwsn {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void open_doc(std::ofstream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth
      << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
}

void axes(std::ofstream& out, double ymin, double ymax,
          const std::string& x_label, const std::string& y_label) {
  const int x0 = kMarginLeft;
  const int x1 = kWidth - kMarginRight;
  const int y0 = kHeight - kMarginBottom;
  const int y1 = kMarginTop;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = ymin + (ymax - ymin) * t / 4.0;
    const double y = y0 - (y0 - y1) * t / 4.0;
    out << "<text x=\"" << x0 - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(v) << "</text>\n"
        << "<line x1=\"" << x0 - 4 << "\" y1=\"" << y << "\" x2=\"" << x0
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << (y0 + y1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 "
      << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";
}

}  // namespace

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  double ymin = 0.0, ymax = 1.0;
  std::size_t nmax = 1;
  bool any = false;
  for (const Series& s : series) {
    for (double v : s.y) {
      if (!any) {
        ymin = ymax = v;
        any = true;
      }
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
    nmax = std::max(nmax, s.y.size());
  }
  if (ymax == ymin) ymax = ymin + 1.0;
  open_doc(out, title);
  axes(out, ymin, ymax, x_label, y_label);
  const double xscale =
      (kWidth - kMarginLeft - kMarginRight) / std::max(1.0, double(nmax - 1));
  const double yspan = kHeight - kMarginTop - kMarginBottom;
  int legend_y = kMarginTop + 8;
  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      const double x = kMarginLeft + xscale * double(i);
      const double y = kHeight - kMarginBottom -
                       yspan * (s.y[i] - ymin) / (ymax - ymin);
      out << num(x) << ',' << num(y) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMarginRight - 6 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\""
        << s.color << "\">" << s.label << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

void write_bar_svg(const std::string& path, const std::string& title,
                   const std::string& y_label,
                   const std::vector<BarGroup>& bars) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  double ymax = 0.0;
  for (const BarGroup& b : bars) ymax = std::max(ymax, b.value);
  if (ymax <= 0.0) ymax = 1.0;
  open_doc(out, title);
  axes(out, 0.0, ymax, "", y_label);
  const int n = static_cast<int>(bars.size());
  const double span = kWidth - kMarginLeft - kMarginRight;
  const double slot = span / std::max(1, n);
  const double width = slot * 0.6;
  const double yspan = kHeight - kMarginTop - kMarginBottom;
  for (int i = 0; i < n; ++i) {
    const double h = yspan * bars[i].value / ymax;
    const double x = kMarginLeft + slot * i + (slot - width) / 2.0;
    const double y = kHeight - kMarginBottom - h;
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
        << num(width) << "\" height=\"" << num(h) << "\" fill=\""
        << bars[i].color << "\"/>\n"
        << "<text x=\"" << num(x + width / 2) << "\" y=\""
        << kHeight - kMarginBottom + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << bars[i].label << "</text>\n"
        << "<text x=\"" << num(x + width / 2) << "\" y=\"" << num(y - 5)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(bars[i].value) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace sdwsn
