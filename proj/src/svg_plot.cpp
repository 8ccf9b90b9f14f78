#include "qfs/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qfs/errors.hpp"

namespace qfs {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     std::span<const PlotSeries> series, bool log_x) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i];
      if (log_x) {
        if (!(xv > 0.0)) continue;
        xv = std::log10(xv);
      }
      if (!std::isfinite(xv) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin <= xmax) || !(ymin <= ymax)) throw ConfigError("plot has no finite data");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double v) { return kMarginLeft + (v - xmin) / (xmax - xmin) * plot_w; };
  const auto py = [&](double v) {
    return kHeight - kMarginBottom - (v - ymin) / (ymax - ymin) * plot_h;
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";

  // axes with five ticks per side
  out << "<g stroke=\"#333\" stroke-width=\"1\" font-size=\"11\" fill=\"#333\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double fy = ymin + (ymax - ymin) * t / 4.0;
    const double gx = px(fx);
    const double gy = py(fy);
    out << "<line x1=\"" << gx << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\"" << gx
        << "\" y2=\"" << kHeight - kMarginBottom + 5 << "\"/>\n"
        << "<text x=\"" << gx << "\" y=\"" << kHeight - kMarginBottom + 18
        << "\" text-anchor=\"middle\" stroke=\"none\">"
        << (log_x ? "1e" + num(fx) : num(fx)) << "</text>\n"
        << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << gy << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << gy << "\"/>\n"
        << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" stroke=\"none\">" << num(fy) << "</text>\n";
  }
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kHeight - kMarginBottom << "\"/>\n"
      << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\""
      << kWidth - kMarginRight << "\" y2=\"" << kHeight - kMarginBottom << "\"/>\n</g>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << kHeight / 2
      << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      double xv = series[s].x[i];
      if (log_x) {
        if (!(xv > 0.0)) continue;
        xv = std::log10(xv);
      }
      if (!std::isfinite(xv) || !std::isfinite(series[s].y[i])) continue;
      out << num(px(xv)) << ',' << num(py(series[s].y[i])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMarginRight - 8 << "\" y=\""
        << kMarginTop + 16.0 * static_cast<double>(s + 1)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace qfs
