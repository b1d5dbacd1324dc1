#include "esnforce/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace esnforce {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf"};
constexpr int kPaletteSize = 10;

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range padded(double lo, double hi) {
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(5) << v;
  return s.str();
}

void open_svg(std::ostream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
}

void draw_axes(std::ostream& out, const Range& xr, const Range& yr,
               const std::string& x_label, const std::string& y_label) {
  const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double px = x0 + (x1 - x0) * i / 5.0;
    out << "<text x=\"" << px << "\" y=\"" << y0 + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(fx) << "</text>\n";
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    const double py = y0 - (y0 - y1) * i / 5.0;
    out << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(fy) << "</text>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << py << "\" x2=\"" << x1
        << "\" y2=\"" << py
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << (y0 + y1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";
}

void draw_legend(std::ostream& out, const std::vector<std::string>& labels) {
  const int lx = kWidth - kMarginRight + 12;
  int ly = kMarginTop + 10;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22
        << "\" y2=\"" << ly << "\" stroke=\""
        << kPalette[i % kPaletteSize] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << labels[i]
        << "</text>\n";
    ly += 18;
  }
}

}  // namespace

void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<PlotSeries>& series) {
  if (series.empty()) throw std::invalid_argument("plot: no series");
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xlo = xhi = s.x[i];
        ylo = yhi = s.y[i];
        any = true;
      }
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!any) throw std::invalid_argument("plot: no finite data points");
  const Range xr = padded(xlo, xhi), yr = padded(ylo, yhi);

  open_svg(out, title);
  draw_axes(out, xr, yr, x_label, y_label);
  const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  std::vector<std::string> labels;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    labels.push_back(s.label);
    out << "<polyline fill=\"none\" stroke=\""
        << kPalette[si % kPaletteSize]
        << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double px =
          x0 + (x1 - x0) * (s.x[i] - xr.lo) / (xr.hi - xr.lo);
      const double py =
          y0 - (y0 - y1) * (s.y[i] - yr.lo) / (yr.hi - yr.lo);
      out << fmt(px) << "," << fmt(py) << " ";
    }
    out << "\"/>\n";
  }
  draw_legend(out, labels);
  out << "</svg>\n";
}

void write_bar_chart_svg(std::ostream& out, const std::string& title,
                         const std::string& y_label,
                         const std::vector<std::string>& series_labels,
                         const std::vector<BarGroup>& groups) {
  if (groups.empty()) throw std::invalid_argument("plot: no bar groups");
  double yhi = 0.0;
  for (const auto& g : groups) {
    for (double v : g.values) yhi = std::max(yhi, v);
  }
  const Range yr = padded(0.0, yhi > 0 ? yhi : 1.0);

  open_svg(out, title);
  draw_axes(out, {0.0, static_cast<double>(groups.size())}, yr, "", y_label);
  const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  const double group_w = static_cast<double>(x1 - x0) / groups.size();
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    const double gx = x0 + gi * group_w;
    const double bar_w = group_w * 0.8 / std::max<std::size_t>(1, g.values.size());
    for (std::size_t bi = 0; bi < g.values.size(); ++bi) {
      const double v = std::clamp(g.values[bi], yr.lo, yr.hi);
      const double h = (y0 - y1) * (v - yr.lo) / (yr.hi - yr.lo);
      out << "<rect x=\"" << fmt(gx + group_w * 0.1 + bi * bar_w) << "\" y=\""
          << fmt(y0 - h) << "\" width=\"" << fmt(bar_w * 0.9)
          << "\" height=\"" << fmt(h) << "\" fill=\""
          << kPalette[bi % kPaletteSize] << "\"/>\n";
    }
    out << "<text x=\"" << fmt(gx + group_w / 2) << "\" y=\"" << y0 + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << g.label << "</text>\n";
  }
  draw_legend(out, series_labels);
  out << "</svg>\n";
}

}  // namespace esnforce
