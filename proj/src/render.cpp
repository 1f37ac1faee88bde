#include "rocus/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rocus/errors.hpp"
#include "rocus/svg.hpp"

namespace rocus {

namespace {

constexpr double kArenaPx = 640.0;
constexpr double kMargin = 20.0;
const char* kPriorColor = "#4878cf";
const char* kPosteriorColor = "#ff8c00";

struct ArenaMap {
  double lo, hi;
  double to_px(double v) const {
    return kMargin + (v - lo) / (hi - lo) * (kArenaPx - 2.0 * kMargin);
  }
  // SVG y grows downward.
  Vec2 map(Vec2 p) const { return {to_px(p.x), kArenaPx - to_px(p.y)}; }
};

void draw_trajectory_set(SvgWriter& svg, const ArenaMap& m,
                         const std::vector<Trajectory>& trajs,
                         const std::string& color, double opacity) {
  for (const Trajectory& t : trajs) {
    std::vector<Vec2> pts;
    pts.reserve(t.positions.size());
    for (Vec2 p : t.positions) pts.push_back(m.map(p));
    svg.polyline(pts, color, 1.2, opacity);
  }
}

}  // namespace

std::string render_trajectories(const std::vector<Trajectory>& prior,
                                const std::vector<Trajectory>& posterior,
                                const EnvParams& params) {
  if (prior.empty() || posterior.empty())
    throw ConfigError("trajectory plot needs at least one trajectory per set");
  SvgWriter svg(kArenaPx, kArenaPx);
  const ArenaMap m{-params.bound, params.bound};
  draw_trajectory_set(svg, m, prior, kPriorColor, 0.35);
  draw_trajectory_set(svg, m, posterior, kPosteriorColor, 0.55);
  const Vec2 s = m.map(params.start);
  const Vec2 g = m.map(params.goal);
  svg.circle(s.x, s.y, 5.0, "#2ca02c");
  svg.circle(g.x, g.y, 5.0, "#d62728");
  svg.text(s.x + 8.0, s.y, "start", 12);
  svg.text(g.x + 8.0, g.y, "goal", 12);
  return svg.finish();
}

std::vector<double> occupancy_frequency(const std::vector<Task2D>& tasks,
                                        const EnvParams& params,
                                        const GridSpec& spec) {
  std::vector<double> freq(spec.size(), 0.0);
  for (const Task2D& task : tasks) {
    const OccupancyGrid grid = rasterize_occupancy(task, params, spec);
    for (int i = 0; i < spec.size(); ++i)
      if (grid.occupied[i] != 0) freq[i] += 1.0;
  }
  if (!tasks.empty())
    for (double& f : freq) f /= tasks.size();
  return freq;
}

std::string render_density_diff(const std::vector<Task2D>& prior,
                                const std::vector<Task2D>& posterior,
                                const EnvParams& params, const GridSpec& spec) {
  if (prior.empty() || posterior.empty())
    throw ConfigError("density diff needs nonempty task sets");
  const std::vector<double> prior_freq = occupancy_frequency(prior, params, spec);
  const std::vector<double> post_freq =
      occupancy_frequency(posterior, params, spec);

  SvgWriter svg(kArenaPx, kArenaPx);
  const ArenaMap m{spec.lo, spec.hi};
  const double px = (kArenaPx - 2.0 * kMargin) / spec.resolution;
  for (int iy = 0; iy < spec.resolution; ++iy) {
    for (int ix = 0; ix < spec.resolution; ++ix) {
      const double v = post_freq[spec.index(ix, iy)] - prior_freq[spec.index(ix, iy)];
      if (std::abs(v) < 1.0 / 255.0) continue;  // white stays background
      const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::min(std::abs(v), 1.0))));
      std::ostringstream color;
      if (v > 0.0)
        color << "rgb(255," << fade << "," << fade << ")";
      else
        color << "rgb(" << fade << "," << fade << ",255)";
      const Vec2 corner = m.map(spec.cell_center(ix, iy) +
                                Vec2{-0.5 * spec.cell_size(), 0.5 * spec.cell_size()});
      svg.rect(corner.x, corner.y, px + 0.1, px + 0.1, color.str());
    }
  }
  const Vec2 s = m.map(params.start);
  const Vec2 g = m.map(params.goal);
  svg.circle(s.x, s.y, 5.0, "#2ca02c");
  svg.circle(g.x, g.y, 5.0, "#d62728");
  return svg.finish();
}

std::string render_trace(const std::vector<double>& series) {
  if (series.empty()) throw ConfigError("trace plot needs a nonempty series");
  const double w = 800.0, h = 300.0, margin = 40.0;
  double lo = *std::min_element(series.begin(), series.end());
  double hi = *std::max_element(series.begin(), series.end());
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  SvgWriter svg(w, h);
  svg.line(margin, h - margin, w - margin, h - margin, "#202020", 1.0);
  svg.line(margin, margin, margin, h - margin, "#202020", 1.0);
  std::vector<Vec2> pts;
  pts.reserve(series.size());
  const double n = std::max<std::size_t>(series.size() - 1, 1);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double x = margin + (w - 2.0 * margin) * (i / n);
    const double y = h - margin - (h - 2.0 * margin) * ((series[i] - lo) / (hi - lo));
    pts.push_back({x, y});
  }
  svg.polyline(pts, kPosteriorColor, 1.0);
  svg.text(margin, margin - 8.0, format_double(hi, 4), 11);
  svg.text(margin, h - margin + 14.0, format_double(lo, 4), 11);
  svg.text(w - margin, h - margin + 14.0,
           std::to_string(series.size()) + " iterations", 11, "end");
  return svg.finish();
}

namespace {

std::vector<double> histogram_density(const std::vector<double>& values,
                                      double lo, double hi, int bins) {
  std::vector<double> density(bins, 0.0);
  if (values.empty()) return density;
  const double width = (hi - lo) / bins;
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    b = std::min(std::max(b, 0), bins - 1);
    density[b] += 1.0;
  }
  for (double& d : density) d /= values.size() * width;
  return density;
}

}  // namespace

std::string render_density(const std::vector<double>& prior_values,
                           const std::vector<double>& posterior_values,
                           int bins) {
  if (prior_values.empty() && posterior_values.empty())
    throw ConfigError("density plot needs values");
  double lo = 1e300, hi = -1e300;
  for (const auto* vs : {&prior_values, &posterior_values})
    for (double v : *vs) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double w = 800.0, h = 300.0, margin = 40.0;
  SvgWriter svg(w, h);
  svg.line(margin, h - margin, w - margin, h - margin, "#202020", 1.0);

  const auto prior_d = histogram_density(prior_values, lo, hi, bins);
  const auto post_d = histogram_density(posterior_values, lo, hi, bins);
  double peak = 0.0;
  for (double d : prior_d) peak = std::max(peak, d);
  for (double d : post_d) peak = std::max(peak, d);
  if (peak == 0.0) peak = 1.0;

  auto draw = [&](const std::vector<double>& density, const char* color) {
    std::vector<Vec2> pts;
    for (int b = 0; b < bins; ++b) {
      const double x0 = margin + (w - 2.0 * margin) * (static_cast<double>(b) / bins);
      const double x1 = margin + (w - 2.0 * margin) * ((b + 1.0) / bins);
      const double y = h - margin - (h - 2.0 * margin) * (density[b] / peak);
      pts.push_back({x0, y});
      pts.push_back({x1, y});
    }
    svg.polyline(pts, color, 1.5);
  };
  if (!prior_values.empty()) draw(prior_d, kPriorColor);
  if (!posterior_values.empty()) draw(post_d, kPosteriorColor);
  svg.text(margin, h - margin + 14.0, format_double(lo, 4), 11);
  svg.text(w - margin, h - margin + 14.0, format_double(hi, 4), 11, "end");
  return svg.finish();
}

std::string summarize(const std::vector<SummaryRow>& rows) {
  std::ostringstream csv;
  csv << "behavior,target,prior_mean,posterior_mean\n";
  csv.precision(17);
  for (const SummaryRow& r : rows)
    csv << r.behavior << "," << r.target << "," << r.prior_mean << ","
        << r.posterior_mean << "\n";
  return csv.str();
}

std::vector<SummaryRow> parse_summary(const std::string& csv) {
  std::vector<SummaryRow> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SummaryRow row;
    std::istringstream ls(line);
    std::string field;
    std::getline(ls, row.behavior, ',');
    std::getline(ls, row.target, ',');
    std::getline(ls, field, ',');
    row.prior_mean = std::stod(field);
    std::getline(ls, field, ',');
    row.posterior_mean = std::stod(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rocus
