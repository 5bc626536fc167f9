#pragma once

#include <string>
#include <vector>

#include "deltaqed/report.hpp"

namespace deltaqed {

// Minimal static SVG line plots for sweep records. Each series pairs an x and
// a y column of the record; output bytes depend only on the record and style.
struct PlotSeries {
  std::string x;
  std::string y;
};

struct PlotStyle {
  std::vector<PlotSeries> series;
  std::string title;
  std::string x_label;
  int width = 720;
  int height = 480;
};

std::string render_svg(const RunRecord& record, const PlotStyle& style);
void emit_plot(const RunRecord& record, const PlotStyle& style,
               const std::string& path);

}  // namespace deltaqed
