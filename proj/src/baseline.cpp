#include "rocus/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace rocus {

TopKResult top_k_select(const EnvParams& env, ControllerKind kind,
                        const BehaviorSpec& spec, int pool_size, int k,
                        Rng& rng, std::size_t max_tape) {
  if (k > pool_size) throw ConfigError("top-k: k must not exceed the pool size");
  const BehaviorDef& behavior = find_behavior(spec.behavior_id);

  std::vector<PoolEntry> pool;
  pool.reserve(pool_size);
  TopKResult result;
  for (int i = 0; i < pool_size; ++i) {
    const Task2D task = sample_prior_task(env, rng);
    GrowthTape tape;
    const RolloutEval eval =
        evaluate_rollout(env, kind, behavior, task, &tape, max_tape, rng);
    if (eval.plan_failed) continue;
    pool.push_back({task, std::move(tape), eval.traj, eval.behavior});
    result.pool_values.push_back(eval.behavior);
  }

  // Lower score = more extreme; stable sort keeps sampling order on ties.
  auto score = [&](const PoolEntry& e) {
    return spec.mode == Mode::matching ? std::abs(e.behavior - spec.target)
                                       : -spec.sign * e.behavior;
  };
  std::vector<int> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score(pool[a]) < score(pool[b]); });

  const int keep = std::min<std::size_t>(k, pool.size());
  result.selected.reserve(keep);
  for (int i = 0; i < keep; ++i) result.selected.push_back(pool[order[i]]);
  if (keep > 0) result.threshold = result.selected.back().behavior;
  return result;
}

}  // namespace rocus
