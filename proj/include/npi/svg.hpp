#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace npi {

// Minimal self-contained SVG line charts; no plotting dependency.

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  int width = 900;
  int height = 540;
  std::optional<std::pair<double, double>> y_range;  // clip series to this range
  std::size_t max_points_per_series = 2000;          // downsample beyond this
};

namespace detail {

inline double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.0) step = 1.0;
  else if (norm <= 2.0) step = 2.0;
  else if (norm <= 5.0) step = 5.0;
  return step * mag;
}

inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace detail

inline void write_line_chart(std::ostream& out, const std::vector<SvgSeries>& series,
                             const SvgChartOptions& opt = {}) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const int ml = 62, mr = 18, mt = opt.title.empty() ? 18 : 40, mb = 46;
  const double pw = opt.width - ml - mr;
  const double ph = opt.height - mt - mb;

  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      double yv = s.y[i];
      if (opt.y_range && (yv < opt.y_range->first || yv > opt.y_range->second)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (!(xmin < xmax)) { xmin = 0.0; xmax = 1.0; }
  if (!(ymin < ymax)) { ymin -= 0.5; ymax += 0.5; }
  if (opt.y_range) { ymin = opt.y_range->first; ymax = opt.y_range->second; }
  const double ypad = 0.05 * (ymax - ymin);
  if (!opt.y_range) { ymin -= ypad; ymax += ypad; }

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    out << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << opt.title << "</text>\n";

  // axes + grid
  out << "<g stroke=\"#cccccc\" stroke-width=\"1\" font-family=\"sans-serif\" "
         "font-size=\"11\">\n";
  const double xstep = detail::nice_step(xmax - xmin);
  for (double v = std::ceil(xmin / xstep) * xstep; v <= xmax + 1e-12 * xstep; v += xstep) {
    out << "<line x1=\"" << px(v) << "\" y1=\"" << mt << "\" x2=\"" << px(v) << "\" y2=\""
        << mt + ph << "\"/>\n";
    out << "<text x=\"" << px(v) << "\" y=\"" << mt + ph + 16
        << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\">"
        << detail::fmt_tick(v) << "</text>\n";
  }
  const double ystep = detail::nice_step(ymax - ymin);
  for (double v = std::ceil(ymin / ystep) * ystep; v <= ymax + 1e-12 * ystep; v += ystep) {
    out << "<line x1=\"" << ml << "\" y1=\"" << py(v) << "\" x2=\"" << ml + pw << "\" y2=\""
        << py(v) << "\"/>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333333\">" << detail::fmt_tick(v)
        << "</text>\n";
  }
  out << "</g>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // series polylines, broken at gaps (non-finite or clipped-away points)
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = palette[si % (sizeof palette / sizeof *palette)];
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / opt.max_points_per_series);
    std::ostringstream seg;
    bool open = false;
    auto flush = [&]() {
      if (open) {
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.4\" points=\"" << seg.str() << "\"/>\n";
        seg.str("");
        open = false;
      }
    };
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      const double xv = s.x[i];
      const double yv = s.y[i];
      const bool visible = std::isfinite(xv) && std::isfinite(yv) &&
                           (!opt.y_range || (yv >= ymin && yv <= ymax));
      if (!visible) {
        flush();
        continue;
      }
      seg << px(xv) << ',' << py(yv) << ' ';
      open = true;
    }
    flush();
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = mt + 14;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = palette[si % (sizeof palette / sizeof *palette)];
    out << "<line x1=\"" << ml + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 34
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + 40 << "\" y=\"" << ly << "\">" << series[si].label
        << "</text>\n";
    ly += 16;
  }
  out << "</g>\n";
  // axis labels
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << opt.x_label
      << "</text>\n";
  if (!opt.y_label.empty())
    out << "<text x=\"14\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">" << opt.y_label << "</text>\n";
  out << "</svg>\n";
}

}  // namespace npi
