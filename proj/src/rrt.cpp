#include "rocus/rrt.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace rocus {

namespace {
constexpr double kEdgeResolution = 0.01;
}

int RrtTree::nearest(Vec2 p) const {
  int best = 0;
  double best_d = norm_sq(positions[0] - p);
  for (int i = 1; i < static_cast<int>(positions.size()); ++i) {
    const double d = norm_sq(positions[i] - p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

bool segment_collision_free(const Task2D& task, const EnvParams& params,
                            Vec2 a, Vec2 b) {
  const double len = distance(a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(len / kEdgeResolution)));
  for (int k = 0; k <= n; ++k) {
    const Vec2 p = a + (b - a) * (static_cast<double>(k) / n);
    if (is_obstacle(task, params, p)) return false;
  }
  return true;
}

bool attempt_grow(const Task2D& task, const EnvParams& params, RrtTree& tree,
                  int from, Vec2 to) {
  if (!segment_collision_free(task, params, tree.positions[from], to))
    return false;
  tree.add(to, from);
  return true;
}

PlannedPath rrt_plan(const Task2D& task, const EnvParams& params,
                     GrowthTape& tape, std::size_t max_tape, Rng& rng) {
  RrtTree tree;
  tree.add(params.start, -1);
  tape.cursor = 0;

  int goal_node = -1;
  if (attempt_grow(task, params, tree, 0, params.goal)) {
    goal_node = 1;
  } else {
    while (goal_node < 0) {
      if (tape.cursor >= max_tape)
        throw PlanFailure("tape budget exhausted without reaching the goal");
      if (tape.cursor == tape.entries.size())
        tape.entries.push_back(rng.uniform_vec(-params.bound, params.bound));
      const Vec2 sample = tape.entries[tape.cursor++];
      const int near = tree.nearest(sample);
      if (!attempt_grow(task, params, tree, near, sample)) continue;
      const int added = static_cast<int>(tree.positions.size()) - 1;
      if (attempt_grow(task, params, tree, added, params.goal))
        goal_node = static_cast<int>(tree.positions.size()) - 1;
    }
  }

  PlannedPath path;
  for (int i = goal_node; i >= 0; i = tree.parents[i])
    path.nodes.push_back(tree.positions[i]);
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

std::vector<Vec2> discretize(const PlannedPath& path, double step_clamp) {
  std::vector<Vec2> actions;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    const Vec2 delta = path.nodes[i] - path.nodes[i - 1];
    const double span = norm_inf(delta);
    if (span == 0.0) continue;
    const int steps = static_cast<int>(std::ceil(span / step_clamp - 1e-12));
    const Vec2 inc = delta / steps;
    for (int k = 0; k < steps; ++k) actions.push_back(inc);
  }
  return actions;
}

Controller rrt_policy(const Task2D& task, const EnvParams& params,
                      GrowthTape& tape, std::size_t max_tape, Rng& rng) {
  const PlannedPath path = rrt_plan(task, params, tape, max_tape, rng);
  auto actions = std::make_shared<std::vector<Vec2>>(
      discretize(path, params.step_clamp));
  auto next = std::make_shared<std::size_t>(0);
  return [actions, next](const RobotState&) -> Vec2 {
    if (*next >= actions->size()) return {};
    return (*actions)[(*next)++];
  };
}

}  // namespace rocus
