#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qfs {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal self-contained SVG line plot; log_x switches the abscissa to
/// log10 (non-positive x values are dropped from the plot).
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     std::span<const PlotSeries> series, bool log_x = false);

}  // namespace qfs
