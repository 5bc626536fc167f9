#include "deltaqed/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace deltaqed {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void widen(double x) {
    if (!std::isfinite(x)) return;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  bool valid() const { return lo <= hi; }
};

// round tick step to 1/2/5 * 10^k
double tick_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2.0 * mag;
  if (r < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

std::string render_svg(const RunRecord& record, const PlotStyle& style) {
  if (record.rows.empty()) throw ConfigError("emit_plot: record has no rows");
  if (style.series.empty()) throw ConfigError("emit_plot: no series requested");

  const auto column_index = [&](const std::string& name) {
    const auto it =
        std::find(record.columns.begin(), record.columns.end(), name);
    if (it == record.columns.end())
      throw ConfigError("emit_plot: no such column: " + name);
    return static_cast<size_t>(it - record.columns.begin());
  };

  struct SeriesIdx {
    size_t x, y;
    std::string label;
  };
  std::vector<SeriesIdx> series;
  for (const auto& s : style.series)
    series.push_back({column_index(s.x), column_index(s.y), s.y});

  Range xr, yr;
  for (const auto& s : series) {
    for (const auto& row : record.rows) {
      if (!std::isfinite(row[s.x]) || !std::isfinite(row[s.y])) continue;
      xr.widen(row[s.x]);
      yr.widen(row[s.y]);
    }
  }
  if (!xr.valid() || !yr.valid())
    throw ConfigError("emit_plot: no finite data points");
  if (!(xr.hi > xr.lo)) xr.hi = xr.lo + 1.0;
  if (!(yr.hi > yr.lo)) yr.hi = yr.lo + 1.0;
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  const double ml = 72, mr = 16, mt = style.title.empty() ? 16 : 36, mb = 48;
  const double pw = style.width - ml - mr;
  const double ph = style.height - mt - mb;
  const auto px = [&](double x) { return ml + pw * (x - xr.lo) / (xr.hi - xr.lo); };
  const auto py = [&](double y) { return mt + ph * (yr.hi - y) / (yr.hi - yr.lo); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
      << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width
      << " " << style.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg << "<text x=\"" << style.width / 2
        << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
           "text-anchor=\"middle\">"
        << style.title << "</text>\n";
  }

  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double xs = tick_step(xr.hi - xr.lo);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-12 * xs; t += xs) {
    const double x = px(t);
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << mt << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << mt + ph << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  const double ys = tick_step(yr.hi - yr.lo);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-12 * ys; t += ys) {
    const double y = py(t);
    svg << "<line x1=\"" << ml << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  const std::string x_label =
      style.x_label.empty() ? style.series.front().x : style.x_label;
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << style.height - 10
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "</g>\n";
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : record.rows) {
      if (!std::isfinite(row[series[s].x]) || !std::isfinite(row[series[s].y]))
        continue;
      if (!first) svg << " ";
      svg << fmt(px(row[series[s].x])) << "," << fmt(py(row[series[s].y]));
      first = false;
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 16 + 16 * s
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << series[s].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const RunRecord& record, const PlotStyle& style,
               const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write plot file: " + path);
  out << render_svg(record, style);
}

}  // namespace deltaqed
