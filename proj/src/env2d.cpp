#include "rocus/env2d.hpp"

#include <cmath>

namespace rocus {

void EnvParams::validate() const {
  if (!(obstacle_threshold < 1.0))
    throw ConfigError("obstacle_threshold must be < 1 so every obstacle point is exposed");
  if (!(obstacle_threshold > 0.0))
    throw ConfigError("obstacle_threshold must be positive");
  if (!(rbf_width > 0.0)) throw ConfigError("rbf_width must be positive");
  if (!(obstacle_box > 0.0) || obstacle_box > bound)
    throw ConfigError("obstacle_box must be in (0, bound]");
  if (norm_inf(start) > bound || norm_inf(goal) > bound)
    throw ConfigError("start/goal outside the arena");
  if (!(step_clamp > 0.0)) throw ConfigError("step_clamp must be positive");
  if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
  if (!(goal_tolerance > 0.0)) throw ConfigError("goal_tolerance must be positive");
}

bool task_in_bounds(const Task2D& task, const EnvParams& params) {
  for (const Vec2& p : task.points)
    if (norm_inf(p) > params.obstacle_box) return false;
  return true;
}

double env_field(const Task2D& task, const EnvParams& params, Vec2 p) {
  double sum = 0.0;
  for (const Vec2& c : task.points) sum += std::exp(-params.rbf_width * norm_sq(p - c));
  return sum;
}

Vec2 env_field_gradient(const Task2D& task, const EnvParams& params, Vec2 p) {
  Vec2 grad{};
  for (const Vec2& c : task.points) {
    const Vec2 d = p - c;
    const double w = -2.0 * params.rbf_width * std::exp(-params.rbf_width * norm_sq(d));
    grad = grad + d * w;
  }
  return grad;
}

bool is_obstacle(const Task2D& task, const EnvParams& params, Vec2 p) {
  // Early exit once the partial sum clears the threshold; terms are positive.
  double sum = 0.0;
  for (const Vec2& c : task.points) {
    sum += std::exp(-params.rbf_width * norm_sq(p - c));
    if (sum > params.obstacle_threshold) return true;
  }
  return false;
}

namespace {

// Clamp a candidate position into the arena and into the per-axis
// displacement box around the step origin.
Vec2 constrain(Vec2 candidate, Vec2 origin, const EnvParams& params) {
  candidate = clamp_box(candidate, -params.bound, params.bound);
  candidate.x = clamp(candidate.x, origin.x - params.step_clamp, origin.x + params.step_clamp);
  candidate.y = clamp(candidate.y, origin.y - params.step_clamp, origin.y + params.step_clamp);
  return candidate;
}

}  // namespace

RobotState step(const Task2D& task, const EnvParams& params, RobotState state,
                Vec2 action) {
  const Vec2 origin = state.position;
  const double c = params.step_clamp;
  const Vec2 clamped{clamp(action.x, -c, c), clamp(action.y, -c, c)};

  Vec2 direct = constrain(origin + clamped, origin, params);
  if (!is_obstacle(task, params, direct)) return {direct};

  // Frictionless inelastic contact: subdivide the move and drop the
  // component along the local field gradient (the obstacle normal),
  // keeping the tangential remainder when it stays free.
  constexpr int kMicroSteps = 10;
  const Vec2 micro = clamped / kMicroSteps;
  Vec2 cur = origin;
  for (int i = 0; i < kMicroSteps; ++i) {
    Vec2 next = constrain(cur + micro, origin, params);
    if (!is_obstacle(task, params, next)) {
      cur = next;
      continue;
    }
    const Vec2 normal = normalized(env_field_gradient(task, params, cur));
    if (norm_sq(normal) == 0.0) break;
    const Vec2 tangential = micro - normal * dot(micro, normal);
    if (norm(tangential) <= 1e-9) break;  // head-on up to numerical noise
    next = constrain(cur + tangential, origin, params);
    if (is_obstacle(task, params, next)) break;
    cur = next;
  }
  return {cur};
}

Task2D sample_prior_task(const EnvParams& params, Rng& rng) {
  for (;;) {
    Task2D task;
    for (Vec2& p : task.points)
      p = rng.uniform_vec(-params.obstacle_box, params.obstacle_box);
    if (!is_obstacle(task, params, params.start) &&
        !is_obstacle(task, params, params.goal))
      return task;
  }
}

Trajectory rollout(const Controller& controller, const Task2D& task,
                   const EnvParams& params) {
  Trajectory traj;
  RobotState state{params.start};
  traj.positions.push_back(state.position);
  for (int i = 0; i < params.max_steps; ++i) {
    if (distance(state.position, params.goal) <= params.goal_tolerance) {
      traj.reached_goal = true;
      return traj;
    }
    const Vec2 action = controller(state);
    state = step(task, params, state, action);
    traj.positions.push_back(state.position);
  }
  traj.reached_goal =
      distance(state.position, params.goal) <= params.goal_tolerance;
  return traj;
}

}  // namespace rocus
