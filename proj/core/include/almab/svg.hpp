#pragma once

#include <string>
#include <vector>

namespace almab {

/// Dependency-free SVG chart with a fixed 800x500 viewport: polylines,
/// circle/triangle markers, vertical rules, axis ticks at round numbers.
/// Rendering is fully deterministic (fixed formatting, insertion order).
class SvgChart {
 public:
  SvgChart(std::string title, std::string x_label, std::string y_label);

  void add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, double stroke_width = 1.5);
  enum class Marker { circle, triangle };
  void add_markers(const std::vector<double>& xs,
                   const std::vector<double>& ys, const std::string& color,
                   Marker marker = Marker::circle, double size = 4.0);
  void add_vline(double x, const std::string& color, const std::string& label);
  void add_legend_entry(const std::string& text, const std::string& color);

  std::string render() const;

 private:
  struct Series {
    std::vector<double> xs, ys;
    std::string color;
    double width = 1.5;
    bool markers = false;
    Marker marker = Marker::circle;
    double size = 4.0;
  };
  struct VLine {
    double x;
    std::string color;
    std::string label;
  };
  struct LegendEntry {
    std::string text;
    std::string color;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<VLine> vlines_;
  std::vector<LegendEntry> legend_;
};

}  // namespace almab
