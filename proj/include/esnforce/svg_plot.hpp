#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esnforce {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line chart with axis ticks and a legend.
void write_line_chart_svg(std::ostream& out, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<PlotSeries>& series);

struct BarGroup {
  std::string label;                 // group name under the axis
  std::vector<double> values;        // one bar per series
};

/// Grouped bar chart; `series_labels` names the bars inside each group.
void write_bar_chart_svg(std::ostream& out, const std::string& title,
                         const std::string& y_label,
                         const std::vector<std::string>& series_labels,
                         const std::vector<BarGroup>& groups);

}  // namespace esnforce
