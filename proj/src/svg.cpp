#include "srpair/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "srpair/errors.hpp"

namespace srpair::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kPaletteSize = 8;

constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 42.0;
constexpr double kMarginBottom = 52.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
};

// 1-2-5 tick spacing targeting about six intervals.
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  const double first = std::ceil(lo / step - 1e-9) * step;
  for (double t = first; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string render(const std::vector<Curve>& curves, const PlotOptions& options) {
  if (curves.empty()) {
    throw ValidationError("plot needs at least one curve");
  }

  Range xr, yr;
  for (const Curve& c : curves) {
    const std::size_t n = std::min(c.x.size(), c.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      if (options.log_y && c.y[i] <= 0.0) continue;
      xr.expand(c.x[i]);
      yr.expand(options.log_y ? std::log10(c.y[i]) : c.y[i]);
    }
  }
  if (!xr.valid() || !yr.valid()) {
    throw ValidationError("plot has no drawable points");
  }
  for (double ref : options.reference_lines) {
    if (options.log_y) {
      if (ref > 0.0) yr.expand(std::log10(ref));
    } else {
      yr.expand(ref);
    }
  }
  if (xr.hi == xr.lo) xr.hi = xr.lo + 1.0;
  if (yr.hi == yr.lo) yr.hi = yr.lo + 1.0;
  const double xpad = 0.0;
  const double ypad = 0.04 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  const double w = options.width;
  const double h = options.height;
  const double plot_w = w - kMarginLeft - kMarginRight;
  const double plot_h = h - kMarginTop - kMarginBottom;
  auto sx = [&](double x) { return kMarginLeft + (x - xr.lo + xpad) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double yv) {
    const double y = options.log_y ? std::log10(yv) : yv;
    return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" viewBox=\"0 0 " << options.width << " " << options.height
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    out << "<text x=\"" << num(w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape(options.title) << "</text>\n";
  }

  // Axes box.
  out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(kMarginTop) << "\" width=\""
      << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  // X ticks.
  for (double t : linear_ticks(xr.lo, xr.hi)) {
    const double px = sx(t);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(kMarginTop + plot_h) << "\" x2=\""
        << num(px) << "\" y2=\"" << num(kMarginTop + plot_h + 5) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(px) << "\" y=\"" << num(kMarginTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
        << "</text>\n";
  }
  // Y ticks: decade labels in log mode, 1-2-5 otherwise.
  if (options.log_y) {
    const int dlo = static_cast<int>(std::ceil(yr.lo - 1e-9));
    const int dhi = static_cast<int>(std::floor(yr.hi + 1e-9));
    for (int d = dlo; d <= dhi; ++d) {
      const double py = sy(std::pow(10.0, d));
      out << "<line x1=\"" << num(kMarginLeft - 5) << "\" y1=\"" << num(py) << "\" x2=\""
          << num(kMarginLeft) << "\" y2=\"" << num(py) << "\" stroke=\"#333\"/>\n";
      out << "<text x=\"" << num(kMarginLeft - 9) << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
          << "</text>\n";
    }
  } else {
    for (double t : linear_ticks(yr.lo, yr.hi)) {
      const double py = kMarginTop + (yr.hi - t) / (yr.hi - yr.lo) * plot_h;
      out << "<line x1=\"" << num(kMarginLeft - 5) << "\" y1=\"" << num(py) << "\" x2=\""
          << num(kMarginLeft) << "\" y2=\"" << num(py) << "\" stroke=\"#333\"/>\n";
      out << "<text x=\"" << num(kMarginLeft - 9) << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
          << "</text>\n";
    }
  }

  // Axis labels.
  out << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\"" << num(h - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(options.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << num(kMarginTop + plot_h / 2) << ")\">"
      << escape(options.y_label) << "</text>\n";

  // Horizontal reference guides.
  for (double ref : options.reference_lines) {
    if (options.log_y && ref <= 0.0) continue;
    const double py = sy(ref);
    if (py < kMarginTop || py > kMarginTop + plot_h) continue;
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(py) << "\" x2=\""
        << num(kMarginLeft + plot_w) << "\" y2=\"" << num(py)
        << "\" stroke=\"#999\" stroke-dasharray=\"5,4\" stroke-width=\"1\"/>\n";
  }

  // Curves, split at gaps (nonfinite or nonpositive-in-log points).
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const Curve& c = curves[ci];
    const char* color = kPalette[ci % kPaletteSize];
    const std::size_t n = std::min(c.x.size(), c.y.size());
    std::ostringstream path;
    bool pen_down = false;
    for (std::size_t i = 0; i < n; ++i) {
      const bool ok = std::isfinite(c.x[i]) && std::isfinite(c.y[i]) &&
                      (!options.log_y || c.y[i] > 0.0);
      if (!ok) {
        pen_down = false;
        continue;
      }
      path << (pen_down ? " L " : " M ") << num(sx(c.x[i])) << ' ' << num(sy(c.y[i]));
      pen_down = true;
    }
    const std::string d = path.str();
    if (d.empty()) continue;
    out << "<path d=\"" << d.substr(1) << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\"/>\n";
  }

  // Legend.
  double ly = kMarginTop + 14.0;
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    if (curves[ci].label.empty()) continue;
    const char* color = kPalette[ci % kPaletteSize];
    const double lx = kMarginLeft + plot_w - 150.0;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 22)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(curves[ci].label)
        << "</text>\n";
    ly += 16.0;
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace srpair::svg
