#include "almab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "almab/csv.hpp"
#include "almab/errors.hpp"

namespace almab {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 25.0;
constexpr double kMarginTop = 45.0;
constexpr double kMarginBottom = 55.0;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

/// Tick step as 1/2/5 times a power of ten giving 4-8 ticks.
double nice_step(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.0) {
    nice = 1.0;
  } else if (frac <= 2.0) {
    nice = 2.0;
  } else if (frac <= 5.0) {
    nice = 5.0;
  }
  return nice * mag;
}

}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgChart::add_line(const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::string& color, double stroke_width) {
  if (xs.size() != ys.size()) throw InputError("SvgChart: xs/ys size mismatch");
  series_.push_back({xs, ys, color, stroke_width, false, Marker::circle, 4.0});
}

void SvgChart::add_markers(const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           const std::string& color, Marker marker,
                           double size) {
  if (xs.size() != ys.size()) throw InputError("SvgChart: xs/ys size mismatch");
  series_.push_back({xs, ys, color, 1.0, true, marker, size});
}

void SvgChart::add_vline(double x, const std::string& color,
                         const std::string& label) {
  vlines_.push_back({x, color, label});
}

void SvgChart::add_legend_entry(const std::string& text,
                                const std::string& color) {
  legend_.push_back({text, color});
}

std::string SvgChart::render() const {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : series_) {
    for (double v : s.xs) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : s.ys) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  for (const auto& v : vlines_) {
    x_lo = std::min(x_lo, v.x);
    x_hi = std::max(x_hi, v.x);
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi - x_lo < 1e-12) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  // headroom so strokes are not clipped at the frame
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double x) {
    return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w;
  };
  const auto sy = [&](double y) {
    return kMarginTop + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
         "height=\"500\" viewBox=\"0 0 800 500\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title_ + "</text>\n";

  // frame
  out += "<rect x=\"" + px(kMarginLeft) + "\" y=\"" + px(kMarginTop) +
         "\" width=\"" + px(plot_w) + "\" height=\"" + px(plot_h) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // ticks
  const double x_step = nice_step(x_hi - x_lo);
  for (double t = std::ceil(x_lo / x_step) * x_step; t <= x_hi + 1e-9 * x_step;
       t += x_step) {
    const double gx = sx(t);
    out += "<line x1=\"" + px(gx) + "\" y1=\"" + px(kMarginTop + plot_h) +
           "\" x2=\"" + px(gx) + "\" y2=\"" + px(kMarginTop + plot_h + 5) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + px(gx) + "\" y=\"" + px(kMarginTop + plot_h + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_number(t == 0.0 ? 0.0 : t) + "</text>\n";
  }
  const double y_step = nice_step(y_hi - y_lo);
  for (double t = std::ceil(y_lo / y_step) * y_step; t <= y_hi + 1e-9 * y_step;
       t += y_step) {
    const double gy = sy(t);
    out += "<line x1=\"" + px(kMarginLeft - 5) + "\" y1=\"" + px(gy) +
           "\" x2=\"" + px(kMarginLeft) + "\" y2=\"" + px(gy) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + px(kMarginLeft - 9) + "\" y=\"" + px(gy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_number(t == 0.0 ? 0.0 : t) + "</text>\n";
  }

  // axis labels
  out += "<text x=\"" + px(kMarginLeft + plot_w / 2) + "\" y=\"" +
         px(kHeight - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         x_label_ + "</text>\n";
  out += "<text x=\"18\" y=\"" + px(kMarginTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " + px(kMarginTop + plot_h / 2) + ")\">" +
         y_label_ + "</text>\n";

  for (const auto& v : vlines_) {
    const double gx = sx(v.x);
    out += "<line x1=\"" + px(gx) + "\" y1=\"" + px(kMarginTop) + "\" x2=\"" +
           px(gx) + "\" y2=\"" + px(kMarginTop + plot_h) + "\" stroke=\"" +
           v.color + "\" stroke-width=\"1.5\" stroke-dasharray=\"5,4\"/>\n";
    if (!v.label.empty()) {
      out += "<text x=\"" + px(gx + 4) + "\" y=\"" + px(kMarginTop + 14) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + v.color +
             "\">" + v.label + "</text>\n";
    }
  }

  for (const auto& s : series_) {
    if (s.markers) {
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        const double gx = sx(s.xs[i]);
        const double gy = sy(s.ys[i]);
        if (s.marker == Marker::circle) {
          out += "<circle cx=\"" + px(gx) + "\" cy=\"" + px(gy) + "\" r=\"" +
                 px(s.size) + "\" fill=\"" + s.color + "\"/>\n";
        } else {
          const double h = s.size;
          out += "<polygon points=\"" + px(gx) + "," + px(gy - h) + " " +
                 px(gx - h) + "," + px(gy + h) + " " + px(gx + h) + "," +
                 px(gy + h) + "\" fill=\"" + s.color + "\"/>\n";
        }
      }
    } else {
      std::string points;
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if (i > 0) points.push_back(' ');
        points += px(sx(s.xs[i])) + "," + px(sy(s.ys[i]));
      }
      out += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
             s.color + "\" stroke-width=\"" + px(s.width) + "\"/>\n";
    }
  }

  double ly = kMarginTop + 10.0;
  for (const auto& entry : legend_) {
    const double lx = kMarginLeft + plot_w - 150.0;
    out += "<rect x=\"" + px(lx) + "\" y=\"" + px(ly - 9) +
           "\" width=\"12\" height=\"12\" fill=\"" + entry.color + "\"/>\n";
    out += "<text x=\"" + px(lx + 18) + "\" y=\"" + px(ly + 1) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + entry.text +
           "</text>\n";
    ly += 18.0;
  }

  out += "</svg>\n";
  return out;
}

}  // namespace almab
