#include "rocus/ds.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace rocus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRayAngle = kTwoPi / kStarRays;

Vec2 ray_direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

Vec2 StarObstacle::vertex(int k) const {
  return reference + ray_direction(k * kRayAngle) * radii[k];
}

double StarObstacle::gamma(Vec2 x) const {
  const Vec2 d = x - reference;
  const double dist = norm(d);
  if (dist == 0.0) return 0.0;
  double angle = std::atan2(d.y, d.x);
  if (angle < 0.0) angle += kTwoPi;
  const double u = angle / kRayAngle;
  int k0 = static_cast<int>(u) % kStarRays;
  const double frac = u - std::floor(u);
  const int k1 = (k0 + 1) % kStarRays;
  const double boundary = radii[k0] * (1.0 - frac) + radii[k1] * frac;
  return dist / boundary;
}

Vec2 StarObstacle::gamma_gradient(Vec2 x) const {
  constexpr double h = 1e-4;
  const double gx = gamma({x.x + h, x.y}) - gamma({x.x - h, x.y});
  const double gy = gamma({x.x, x.y + h}) - gamma({x.x, x.y - h});
  return {gx / (2.0 * h), gy / (2.0 * h)};
}

std::vector<StarObstacle> extract_obstacles(const Task2D& task,
                                            const EnvParams& params) {
  return extract_obstacles(rasterize_occupancy(task, params));
}

std::vector<StarObstacle> extract_obstacles(const OccupancyGrid& grid) {
  const GridSpec& spec = grid.spec;
  const ComponentLabels labels = flood_fill_components(grid);
  if (labels.count == 0) return {};

  struct Accum {
    double sx = 0.0, sy = 0.0;
    int cells = 0;
    double max_r_sq = 0.0;  // filled after centroids are known
  };
  std::vector<Accum> acc(labels.count);
  for (int iy = 0; iy < spec.resolution; ++iy)
    for (int ix = 0; ix < spec.resolution; ++ix) {
      const int c = labels.label[spec.index(ix, iy)];
      if (c < 0) continue;
      const Vec2 p = spec.cell_center(ix, iy);
      acc[c].sx += p.x;
      acc[c].sy += p.y;
      acc[c].cells += 1;
    }

  std::vector<StarObstacle> out(labels.count);
  for (int c = 0; c < labels.count; ++c) {
    out[c].reference = {acc[c].sx / acc[c].cells, acc[c].sy / acc[c].cells};
    out[c].radii.assign(kStarRays, 0.0);
  }
  for (int iy = 0; iy < spec.resolution; ++iy)
    for (int ix = 0; ix < spec.resolution; ++ix) {
      const int c = labels.label[spec.index(ix, iy)];
      if (c < 0) continue;
      acc[c].max_r_sq = std::max(
          acc[c].max_r_sq, norm_sq(spec.cell_center(ix, iy) - out[c].reference));
    }

  // March each ray and keep the farthest point still inside the component;
  // taking the farthest crossing completes non-star shapes to star shapes.
  const double step = spec.cell_size() / 4.0;
  const double min_radius = spec.cell_size() / 2.0;
  for (int c = 0; c < labels.count; ++c) {
    const double max_r = std::sqrt(acc[c].max_r_sq) + spec.cell_size();
    for (int k = 0; k < kStarRays; ++k) {
      const Vec2 dir = ray_direction(k * kRayAngle);
      double farthest = 0.0;
      for (double t = step; t <= max_r; t += step) {
        const Vec2 p = out[c].reference + dir * t;
        if (!spec.contains(p)) break;
        if (labels.label[spec.index(spec.cell_x(p.x), spec.cell_x(p.y))] == c)
          farthest = t;
      }
      // Boundary sits between the last inside sample and the next one out.
      out[c].radii[k] = std::max(farthest + step / 2.0, min_radius);
    }
  }
  return out;
}

namespace {

// Columns of the obstacle frame: radial unit vector and a tangent.
struct Frame {
  Vec2 radial;
  Vec2 tangent;
};

Frame obstacle_frame(const StarObstacle& obs, Vec2 x) {
  const Vec2 s = normalized(x - obs.reference);
  Vec2 t = perpendicular(normalized(obs.gamma_gradient(x)));
  // Degenerate gradient, or tangent collapsed onto the radial direction:
  // fall back to the radial perpendicular.
  if (norm_sq(t) == 0.0 || std::abs(cross(s, t)) < 1e-9)
    t = perpendicular(s);
  return {s, t};
}

}  // namespace

Vec2 modulate_single(const StarObstacle& obs, Vec2 x, Vec2 u) {
  const double g = obs.gamma(x);
  const Vec2 s = normalized(x - obs.reference);
  if (g <= 1.0) return s * norm(u);  // inside: move outward at input speed

  const Frame e = obstacle_frame(obs, x);
  const double lambda_radial = 1.0 - 1.0 / g;
  const double lambda_tangent = 1.0 + 1.0 / g;

  // u in the obstacle frame (2x2 solve), scaled, and mapped back.
  const double det = cross(e.radial, e.tangent);
  const double a = (u.x * e.tangent.y - u.y * e.tangent.x) / det;
  const double b = (e.radial.x * u.y - e.radial.y * u.x) / det;
  return e.radial * (lambda_radial * a) + e.tangent * (lambda_tangent * b);
}

double kappa_encode(double along, double tail) {
  const double c = clamp(along, -1.0, 1.0);
  if (tail != 0.0) return std::acos(c) * (tail > 0.0 ? 1.0 : -1.0);
  return c >= 0.0 ? 0.0 : std::numbers::pi;
}

Vec2 kappa_decode(double kappa) { return {std::cos(kappa), std::sin(kappa)}; }

std::vector<double> aggregation_weights(const std::vector<StarObstacle>& obstacles,
                                        Vec2 x) {
  const int n = static_cast<int>(obstacles.size());
  std::vector<double> gammas(n);
  for (int i = 0; i < n; ++i) gammas[i] = obstacles[i].gamma(x);

  // b_i -> the whole share as x nears obstacle i and only i (components
  // are disjoint by construction, so no two factors vanish together).
  std::vector<double> w(n);
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    double b = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) b *= gammas[j] - 1.0;
    w[i] = b;
    wsum += b;
  }
  if (wsum > 0.0)
    for (double& wi : w) wi /= wsum;
  else
    for (double& wi : w) wi = 1.0 / n;
  return w;
}

Vec2 aggregate(const std::vector<StarObstacle>& obstacles, Vec2 x, Vec2 goal) {
  const Vec2 nominal = goal - x;
  if (obstacles.empty()) return nominal;
  if (norm_sq(nominal) == 0.0) return nominal;
  if (obstacles.size() == 1) return modulate_single(obstacles[0], x, nominal);

  const int n = static_cast<int>(obstacles.size());
  int deepest = -1;
  double deepest_gamma = 1.0;
  for (int i = 0; i < n; ++i) {
    const double g = obstacles[i].gamma(x);
    if (g <= deepest_gamma) {
      deepest_gamma = g;
      deepest = i;
    }
  }
  if (deepest >= 0) return modulate_single(obstacles[deepest], x, nominal);

  const std::vector<double> w = aggregation_weights(obstacles, x);

  // Angle-space mixing around the nominal direction.
  const Vec2 r0 = normalized(nominal);
  const Vec2 r1 = perpendicular(r0);
  double agg_norm = 0.0;
  double agg_angle = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 ui = modulate_single(obstacles[i], x, nominal);
    const double ni = norm(ui);
    agg_norm += w[i] * ni;
    if (ni > 0.0)
      agg_angle += w[i] * kappa_encode(dot(ui / ni, r0), dot(ui / ni, r1));
  }
  const Vec2 dir = kappa_decode(agg_angle);
  return (r0 * dir.x + r1 * dir.y) * agg_norm;
}

Controller ds_policy(const Task2D& task, const EnvParams& params) {
  return ds_policy(extract_obstacles(task, params), params.goal,
                   params.step_clamp);
}

Controller ds_policy(std::vector<StarObstacle> obstacles, Vec2 goal,
                     double speed) {
  auto shared = std::make_shared<std::vector<StarObstacle>>(std::move(obstacles));
  return [shared, goal, speed](const RobotState& state) {
    Vec2 v = aggregate(*shared, state.position, goal);
    const double n = norm(v);
    if (n > speed) v = v * (speed / n);
    return v;
  };
}

}  // namespace rocus
