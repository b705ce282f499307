#ifndef QOCT_PLOT_HPP
#define QOCT_PLOT_HPP

// ---------------------------------------------------------------------------
// Minimal static SVG line plots.  Plots are derived artifacts only — CSVs are
// the data interchange format — so a small hand-rolled renderer with linear
// and logarithmic y axes is all the toolkit needs.
// ---------------------------------------------------------------------------

#include <optional>
#include <string>
#include <vector>

namespace qoct {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  // Optional explicit y-axis limits; by default the axis hugs the data.
  std::optional<double> y_min;
  std::optional<double> y_max;
  std::vector<PlotSeries> series;
};

// Renders `spec` as an SVG file at `path`.  Throws IoError if the file
// cannot be written and std::invalid_argument for empty or ragged series.
void write_svg_plot(const std::string& path, const PlotSpec& spec);

}  // namespace qoct

#endif  // QOCT_PLOT_HPP
