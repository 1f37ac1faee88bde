#include "rocus/svg.hpp"

#include <iomanip>

namespace rocus {

std::string format_double(double v, int precision) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

SvgWriter::SvgWriter(double width, double height)
    : width_(width), height_(height) {}

void SvgWriter::line(double x1, double y1, double x2, double y2,
                     const std::string& stroke, double stroke_width,
                     double opacity) {
  body_ << "<line x1=\"" << format_double(x1) << "\" y1=\"" << format_double(y1)
        << "\" x2=\"" << format_double(x2) << "\" y2=\"" << format_double(y2)
        << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << format_double(stroke_width) << "\" stroke-opacity=\""
        << format_double(opacity) << "\"/>\n";
}

void SvgWriter::polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                         double stroke_width, double opacity) {
  body_ << "<path fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
        << format_double(stroke_width) << "\" stroke-opacity=\""
        << format_double(opacity) << "\" d=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    body_ << (i == 0 ? "M" : "L") << format_double(pts[i].x) << " "
          << format_double(pts[i].y);
  body_ << "\"/>\n";
}

void SvgWriter::rect(double x, double y, double w, double h,
                     const std::string& fill) {
  body_ << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y)
        << "\" width=\"" << format_double(w) << "\" height=\""
        << format_double(h) << "\" fill=\"" << fill << "\"/>\n";
}

void SvgWriter::circle(double cx, double cy, double r, const std::string& fill) {
  body_ << "<circle cx=\"" << format_double(cx) << "\" cy=\""
        << format_double(cy) << "\" r=\"" << format_double(r) << "\" fill=\""
        << fill << "\"/>\n";
}

void SvgWriter::text(double x, double y, const std::string& content,
                     int font_size, const std::string& anchor) {
  body_ << "<text x=\"" << format_double(x) << "\" y=\"" << format_double(y)
        << "\" font-size=\"" << font_size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">"
        << content << "</text>\n";
}

std::string SvgWriter::finish() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << format_double(width_, 0) << "\" height=\"" << format_double(height_, 0)
      << "\" viewBox=\"0 0 " << format_double(width_, 0) << " "
      << format_double(height_, 0) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << format_double(width_, 0)
      << "\" height=\"" << format_double(height_, 0) << "\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

}  // namespace rocus
