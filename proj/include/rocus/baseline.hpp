#pragma once

#include <vector>

#include "rocus/sampler.hpp"

namespace rocus {

struct PoolEntry {
  Task2D task;
  GrowthTape tape;  // consumed entries when the controller is RRT
  Trajectory traj;
  double behavior = 0.0;
};

struct TopKResult {
  std::vector<PoolEntry> selected;   // most extreme first
  std::vector<double> pool_values;   // every scored rollout, sampling order
  double threshold = 0.0;            // k-th most extreme behavior value
};

// Score N prior rollouts and keep the k most extreme: smallest |b - target|
// for matching, largest sign * b for maximal. Ties break by sampling order.
TopKResult top_k_select(const EnvParams& env, ControllerKind kind,
                        const BehaviorSpec& spec, int pool_size, int k,
                        Rng& rng, std::size_t max_tape = 10000);

}  // namespace rocus
