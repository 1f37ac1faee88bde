#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "rocus/geometry.hpp"

namespace rocus {

// Minimal self-contained SVG emitter; numbers are written with fixed
// precision so output bytes are stable.
class SvgWriter {
 public:
  SvgWriter(double width, double height);

  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double stroke_width,
            double opacity = 1.0);
  void polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                double stroke_width, double opacity = 1.0);
  void rect(double x, double y, double w, double h, const std::string& fill);
  void circle(double cx, double cy, double r, const std::string& fill);
  void text(double x, double y, const std::string& content, int font_size,
            const std::string& anchor = "start");

  std::string finish() const;

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

std::string format_double(double v, int precision = 2);

}  // namespace rocus
