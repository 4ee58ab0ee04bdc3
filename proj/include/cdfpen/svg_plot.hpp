#pragma once

#include <string>
#include <vector>

namespace cdfpen {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Minimal line chart: axes with ticks, one polyline per series, legend.
std::string render_svg(const LinePlot& plot, int width = 720, int height = 440);

}  // namespace cdfpen
