#pragma once

#include <cstddef>
#include <vector>

#include "rocus/env2d.hpp"
#include "rocus/random.hpp"

namespace rocus {

// The planner's randomness, reified: configuration draws are recorded so a
// plan is a deterministic function of (task, tape). Entries are only ever
// appended, never rewritten; `cursor` counts entries consumed by the most
// recent plan.
struct GrowthTape {
  std::vector<Vec2> entries;
  std::size_t cursor = 0;
};

struct PlannedPath {
  std::vector<Vec2> nodes;  // start first, goal last
};

struct RrtTree {
  std::vector<Vec2> positions;
  std::vector<int> parents;  // -1 at the root

  int add(Vec2 p, int parent) {
    positions.push_back(p);
    parents.push_back(parent);
    return static_cast<int>(positions.size()) - 1;
  }
  // Euclidean nearest tree node, linear scan.
  int nearest(Vec2 p) const;
};

// Straight segment free at sampling resolution 0.01 (endpoints included).
bool segment_collision_free(const Task2D& task, const EnvParams& params,
                            Vec2 a, Vec2 b);

// Adds `to` with an edge from node `from` iff the segment is free.
bool attempt_grow(const Task2D& task, const EnvParams& params, RrtTree& tree,
                  int from, Vec2 to);

// Deterministic in (task, tape prefix). Exhausted tapes are extended with
// fresh uniform draws from `rng`. Throws PlanFailure once `max_tape`
// entries have been consumed without reaching the goal.
PlannedPath rrt_plan(const Task2D& task, const EnvParams& params,
                     GrowthTape& tape, std::size_t max_tape, Rng& rng);

// Splits each path segment into steps within the per-axis bound.
std::vector<Vec2> discretize(const PlannedPath& path, double step_clamp);

// Plans eagerly, then plays the discretized actions back one per tick.
Controller rrt_policy(const Task2D& task, const EnvParams& params,
                      GrowthTape& tape, std::size_t max_tape, Rng& rng);

}  // namespace rocus
