#pragma once

#include <vector>

#include "rocus/env2d.hpp"
#include "rocus/grid.hpp"

namespace rocus {

inline constexpr int kStarRays = 50;

// Star-shaped polygon approximation of one connected obstacle component:
// boundary radii along equally spaced rays from an interior reference point.
struct StarObstacle {
  Vec2 reference;
  std::vector<double> radii;  // kStarRays entries, all > 0

  Vec2 vertex(int k) const;

  // Radially monotone obstacle descriptor: < 1 inside, 1 on the polygon
  // boundary, ratio of distances along the ray otherwise. Radii are
  // interpolated linearly in angle between adjacent rays. At the reference
  // point itself the value is 0.
  double gamma(Vec2 x) const;

  // Central finite differences, h = 1e-4.
  Vec2 gamma_gradient(Vec2 x) const;
};

std::vector<StarObstacle> extract_obstacles(const Task2D& task,
                                            const EnvParams& params);
std::vector<StarObstacle> extract_obstacles(const OccupancyGrid& grid);

// Velocity transform for one obstacle: nulls the radial component and
// amplifies the tangential one as the boundary nears. Inside the obstacle
// the output is the outward direction at the input speed.
Vec2 modulate_single(const StarObstacle& obs, Vec2 x, Vec2 u);

// Angle-space coordinate of a unit direction given by its components
// (along, tail) in the nominal frame, and its inverse. Encoding a zero
// tail with along = 1 gives 0.
double kappa_encode(double along, double tail);
Vec2 kappa_decode(double kappa);  // returns (along, tail)

// Normalized mixing weights; vanish for all but obstacle i as x reaches
// its boundary. Requires x strictly outside every obstacle.
std::vector<double> aggregation_weights(const std::vector<StarObstacle>& obstacles,
                                        Vec2 x);

// Multi-obstacle combination: norms mix linearly with boundary-vanishing
// weights, directions mix in angle space around the nominal direction.
Vec2 aggregate(const std::vector<StarObstacle>& obstacles, Vec2 x, Vec2 goal);

// Linear attractor to the goal, modulated around the task's obstacles.
// Extraction happens once; the returned controller is stateless. The
// modulated velocity is capped to `speed` preserving its direction (the
// simulator's per-axis clamp would otherwise fold directions onto the
// diagonals at full speed).
Controller ds_policy(const Task2D& task, const EnvParams& params);
Controller ds_policy(std::vector<StarObstacle> obstacles, Vec2 goal,
                     double speed = 0.03);

}  // namespace rocus
