#include "gdiff/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gdiff/errors.hpp"

namespace gdiff {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 16.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 44.0;

// Fixed palette, cycled per curve.
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string curves_svg(const std::vector<ErrorCurve>& curves) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -std::numeric_limits<double>::infinity();
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const ErrorCurve& c : curves) {
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      x_lo = std::min(x_lo, c.times[i]);
      x_hi = std::max(x_hi, c.times[i]);
      if (c.values[i] > 0.0) {
        y_lo = std::min(y_lo, c.values[i]);
        y_hi = std::max(y_hi, c.values[i]);
      }
    }
  }
  if (!(x_lo <= x_hi) || !(y_lo <= y_hi)) {
    throw DomainError("curves_svg: no positive data to plot");
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  double ly_lo = std::log10(y_lo);
  double ly_hi = std::log10(y_hi);
  if (ly_hi == ly_lo) {
    ly_lo -= 0.5;
    ly_hi += 0.5;
  }

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double t) {
    return kMarginLeft + (t - x_lo) / (x_hi - x_lo) * plot_w;
  };
  auto py = [&](double v) {
    double ly = std::log10(v);
    return kMarginTop + (ly_hi - ly) / (ly_hi - ly_lo) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) +
         " " + fmt(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Gridlines and tick labels at integer powers of ten on y.
  int p_lo = static_cast<int>(std::ceil(ly_lo - 1e-9));
  int p_hi = static_cast<int>(std::floor(ly_hi + 1e-9));
  for (int p = p_lo; p <= p_hi; ++p) {
    double y = py(std::pow(10.0, p));
    out += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
           fmt(kWidth - kMarginRight) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt(kMarginLeft - 6.0) + "\" y=\"" + fmt(y + 4.0) +
           "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
           "1e" + std::to_string(p) + "</text>\n";
  }
  // Four x ticks.
  for (int i = 0; i <= 4; ++i) {
    double t = x_lo + (x_hi - x_lo) * i / 4.0;
    double x = px(t);
    out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kHeight - kMarginBottom) +
           "\" x2=\"" + fmt(x) + "\" y2=\"" +
           fmt(kHeight - kMarginBottom + 5.0) +
           "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + fmt(x) + "\" y=\"" +
           fmt(kHeight - kMarginBottom + 18.0) +
           "\" text-anchor=\"middle\" font-size=\"11\" "
           "font-family=\"sans-serif\">" + fmt(t) + "</text>\n";
  }

  // Axes.
  out += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(kMarginTop) +
         "\" x2=\"" + fmt(kMarginLeft) + "\" y2=\"" +
         fmt(kHeight - kMarginBottom) +
         "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" +
         fmt(kHeight - kMarginBottom) + "\" x2=\"" + fmt(kWidth - kMarginRight) +
         "\" y2=\"" + fmt(kHeight - kMarginBottom) +
         "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out += "<text x=\"" + fmt(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
         fmt(kHeight - 8.0) +
         "\" text-anchor=\"middle\" font-size=\"12\" "
         "font-family=\"sans-serif\">forward time</text>\n";

  // Curves: polylines broken at non-positive values.
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const ErrorCurve& c = curves[ci];
    const char* color = kPalette[ci % kPaletteSize];
    std::string points;
    auto flush = [&]() {
      if (!points.empty()) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        points.clear();
      }
    };
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      if (c.values[i] > 0.0) {
        if (!points.empty()) points += " ";
        points += fmt(px(c.times[i])) + "," + fmt(py(c.values[i]));
      } else {
        flush();
      }
    }
    flush();
    // Legend entry.
    double ly = kMarginTop + 14.0 * static_cast<double>(ci) + 8.0;
    double lx = kMarginLeft + 10.0;
    out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(lx + 18.0) + "\" y2=\"" + fmt(ly) + "\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(lx + 24.0) + "\" y=\"" + fmt(ly + 4.0) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" + c.label +
           "</text>\n";
  }

  out += "</svg>\n";
  return out;
}

}  // namespace gdiff
