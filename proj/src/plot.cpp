#include "qoct/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qoct/io.hpp"

namespace qoct {
namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string esc(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Nice tick spacing: largest of {1,2,5}*10^k giving at most `max_ticks` steps.
std::vector<double> linear_ticks(double lo, double hi, int max_ticks = 7) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / std::max(1, max_ticks - 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  std::vector<double> ticks;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 0.5 * step; t += step) {
    double v = (std::abs(t) < 1e-12 * step) ? 0.0 : t;
    ticks.push_back(v);
  }
  return ticks;
}

std::vector<double> decade_ticks(double lo_log, double hi_log) {
  int lo = static_cast<int>(std::ceil(lo_log - 1e-9));
  int hi = static_cast<int>(std::floor(hi_log + 1e-9));
  int n = hi - lo + 1;
  int stride = std::max(1, (n + 9) / 10);
  std::vector<double> ticks;
  for (int d = lo; d <= hi; d += stride) ticks.push_back(static_cast<double>(d));
  return ticks;
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec) {
  if (spec.series.empty()) throw std::invalid_argument("write_svg_plot: no series to draw");
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("write_svg_plot: series '" + s.label + "' has ragged x/y lengths");
    if (s.x.empty()) throw std::invalid_argument("write_svg_plot: series '" + s.label + "' is empty");
  }

  // Data ranges. On a log axis non-positive y values are clamped to the axis
  // floor rather than dropped, so near-zero errors still render.
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  for (const auto& s : spec.series) {
    for (double v : s.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : s.y) {
      if (spec.log_y && !(v > 0.0)) continue;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!std::isfinite(y_lo)) {  // all-nonpositive data on a log axis
    y_lo = 1e-10;
    y_hi = 1.0;
  }
  if (spec.y_min) y_lo = *spec.y_min;
  if (spec.y_max) y_hi = *spec.y_max;
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + (spec.log_y ? y_lo : 1.0);

  double ty_lo, ty_hi;  // transformed y range
  if (spec.log_y) {
    ty_lo = std::log10(y_lo);
    ty_hi = std::log10(y_hi);
  } else {
    const double pad = 0.05 * (y_hi - y_lo);
    ty_lo = y_lo - pad;
    ty_hi = y_hi + pad;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) {
    double ty = spec.log_y ? std::log10(std::max(y, y_lo)) : y;
    ty = std::clamp(ty, ty_lo, ty_hi);
    return kTop + plot_h - (ty - ty_lo) / (ty_hi - ty_lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"28\" font-family=\"sans-serif\" font-size=\"17\" "
         "text-anchor=\"middle\">"
      << esc(spec.title) << "</text>\n";

  // Gridlines and tick labels.
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  for (double t : linear_ticks(x_lo, x_hi)) {
    const double x = px(t);
    svg << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">" << num(t)
        << "</text>\n";
  }
  if (spec.log_y) {
    for (double d : decade_ticks(ty_lo, ty_hi)) {
      const double y = kTop + plot_h - (d - ty_lo) / (ty_hi - ty_lo) * plot_h;
      svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << y
          << "\" stroke=\"#ddd\"/>\n"
          << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << num(d)
          << "</text>\n";
    }
  } else {
    for (double t : linear_ticks(ty_lo, ty_hi)) {
      const double y = py(t);
      svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << y
          << "\" stroke=\"#ddd\"/>\n"
          << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << num(t)
          << "</text>\n";
    }
  }
  svg << "</g>\n";

  // Frame and axis labels.
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n"
      << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << esc(spec.x_label)
      << "</text>\n"
      << "<text x=\"22\" y=\"" << kTop + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 22 "
      << kTop + plot_h / 2 << ")\">" << esc(spec.y_label) << "</text>\n";

  // Data polylines.
  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % kPaletteSize];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) svg << px(s.x[i]) << "," << py(s.y[i]) << " ";
    svg << "\"/>\n";
  }

  // Legend (skipped when labels are all empty).
  bool any_label = false;
  for (const auto& s : spec.series)
    if (!s.label.empty()) any_label = true;
  if (any_label) {
    double ly = kTop + 14;
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
      const auto& s = spec.series[si];
      if (s.label.empty()) continue;
      const char* color = kPalette[si % kPaletteSize];
      const double lx = kLeft + plot_w - 170;
      svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 26 << "\" y2=\"" << ly - 4
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
          << "<text x=\"" << lx + 32 << "\" y=\"" << ly
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(s.label) << "</text>\n";
      ly += 18;
    }
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << svg.str();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace qoct
