#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rocus/env2d.hpp"
#include "rocus/grid.hpp"

namespace rocus {

using ScalarField = std::function<double(Vec2)>;

// Discretized line integral over the trajectory's segments, field sampled
// at segment midpoints. The normalized form divides by the path length; a
// zero-length path degenerates to the field value at the first position.
double line_integral(const Trajectory& traj, const ScalarField& field,
                     bool normalized);

double trajectory_length(const Trajectory& traj);

// Finite-difference derivative magnitudes averaged along the path,
// dt = one simulator step.
double avg_velocity(const Trajectory& traj);
double avg_acceleration(const Trajectory& traj);
double avg_jerk(const Trajectory& traj);

// Mean perpendicular distance from the chord through first and last
// positions. Throws DegenerateTrajectory when the chord collapses.
double straight_line_deviation(const Trajectory& traj);

// Mean nearest-obstacle distance along the path.
double obstacle_clearance(const Trajectory& traj, const DistanceField& dfield);

// Speed averaged with inverse-distance weights, distances floored at 1e-3.
double near_obstacle_velocity(const Trajectory& traj,
                              const DistanceField& dfield);

// Mean cosine between instantaneous motion and the direction to the goal.
double legibility(const Trajectory& traj, Vec2 goal);

// ---- registry ------------------------------------------------------------

struct BehaviorEnv {
  const Task2D& task;
  const EnvParams& params;
  const DistanceField* dfield = nullptr;  // present iff the behavior needs it
};

using BehaviorFn = std::function<double(const Trajectory&, const BehaviorEnv&)>;

struct BehaviorDef {
  std::string id;
  bool needs_distance_field = false;
  BehaviorFn eval;
};

const std::vector<BehaviorDef>& behavior_registry();
const BehaviorDef& find_behavior(std::string_view id);  // throws ConfigError

}  // namespace rocus
