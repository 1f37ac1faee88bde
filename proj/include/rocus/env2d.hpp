#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rocus/errors.hpp"
#include "rocus/geometry.hpp"
#include "rocus/random.hpp"

namespace rocus {

inline constexpr int kObstaclePoints = 15;

// One navigation problem instance: the RBF obstacle points.
struct Task2D {
  std::array<Vec2, kObstaclePoints> points{};

  bool operator==(const Task2D&) const = default;
};

struct EnvParams {
  double rbf_width = 25.0;           // kernel exponent scale
  double obstacle_threshold = 0.9;   // field above this is obstacle space
  double obstacle_box = 0.7;         // obstacle points live in [-box, box]^2
  double bound = 1.2;                // arena is [-bound, bound]^2
  Vec2 start{-1.0, -1.0};
  Vec2 goal{1.0, 1.0};
  double step_clamp = 0.03;          // per-axis action bound
  int max_steps = 1000;
  double goal_tolerance = 0.05;

  void validate() const;  // throws ConfigError on inconsistent values
};

struct RobotState {
  Vec2 position;
};

// Time base is one simulator step per sample.
struct Trajectory {
  std::vector<Vec2> positions;
  bool reached_goal = false;
};

bool task_in_bounds(const Task2D& task, const EnvParams& params);

// Sum of RBF kernels centered at the obstacle points.
double env_field(const Task2D& task, const EnvParams& params, Vec2 p);
Vec2 env_field_gradient(const Task2D& task, const EnvParams& params, Vec2 p);
bool is_obstacle(const Task2D& task, const EnvParams& params, Vec2 p);

// One simulator tick: clamp the action per axis, move if free, otherwise
// slide tangent to the obstacle boundary. A fully blocked move returns the
// unchanged state. The result is always in free space and inside the arena.
RobotState step(const Task2D& task, const EnvParams& params, RobotState state,
                Vec2 action);

// Uniform obstacle points; tasks whose start or goal is blocked are
// rejected and redrawn.
Task2D sample_prior_task(const EnvParams& params, Rng& rng);

using Controller = std::function<Vec2(const RobotState&)>;

// Iterates the simulator until the goal is within tolerance or the step cap
// is hit. Controller exceptions (ControllerFailure) propagate.
Trajectory rollout(const Controller& controller, const Task2D& task,
                   const EnvParams& params);

}  // namespace rocus
