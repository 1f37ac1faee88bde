#include "rocus/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rocus/ds.hpp"
#include "rocus/grid.hpp"

namespace rocus {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kLogSqrt2Pi = 0.9189385332046727;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

void BehaviorSpec::validate() const {
  find_behavior(behavior_id);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
  if (mode == Mode::matching && !std::isfinite(target))
    throw ConfigError("matching target must be finite");
  if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
}

void SamplerConfig::validate() const {
  if (n_samples <= 0) throw ConfigError("n_samples must be positive");
  if (burn_in < 0 || burn_in >= n_samples)
    throw ConfigError("burn_in must be in [0, n_samples)");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (!(kernel_sigma > 0.0)) throw ConfigError("kernel_sigma must be positive");
  if (!(tape_sigma_fraction > 0.0))
    throw ConfigError("tape_sigma_fraction must be positive");
  if (n_prior < 100) throw ConfigError("n_prior must be at least 100");
}

double Calibration::loglik(double behavior) const {
  double z;
  if (mode == Mode::matching) {
    z = (behavior - target) / sigma;
  } else {
    const double standardized = (sign * behavior - marginal_mean) / marginal_std;
    z = (1.0 - sigmoid(standardized)) / sigma;
  }
  return -0.5 * z * z - std::log(sigma) - kLogSqrt2Pi;
}

RolloutEval evaluate_rollout(const EnvParams& env, ControllerKind kind,
                             const BehaviorDef& behavior, const Task2D& task,
                             GrowthTape* tape, std::size_t max_tape, Rng& rng) {
  RolloutEval out;
  const bool need_grid = kind == ControllerKind::ds || behavior.needs_distance_field;
  OccupancyGrid occ;
  if (need_grid) occ = rasterize_occupancy(task, env);

  try {
    Controller controller;
    if (kind == ControllerKind::ds)
      controller = ds_policy(extract_obstacles(occ), env.goal);
    else
      controller = rrt_policy(task, env, *tape, max_tape, rng);
    out.traj = rollout(controller, task, env);
  } catch (const ControllerFailure&) {
    out.plan_failed = true;
    return out;
  }

  BehaviorEnv benv{task, env, nullptr};
  DistanceField dfield;
  if (behavior.needs_distance_field) {
    dfield = build_distance_field(occ);
    benv.dfield = &dfield;
  }
  out.behavior = behavior.eval(out.traj, benv);
  return out;
}

MarginalStats estimate_marginal(const EnvParams& env, ControllerKind kind,
                                const BehaviorDef& behavior, int n_prior,
                                Rng& rng, std::size_t max_tape) {
  MarginalStats stats;
  stats.samples.reserve(n_prior);
  for (int i = 0; i < n_prior; ++i) {
    const Task2D task = sample_prior_task(env, rng);
    GrowthTape tape;
    const RolloutEval eval =
        evaluate_rollout(env, kind, behavior, task, &tape, max_tape, rng);
    if (eval.plan_failed) {
      ++stats.skipped;
      continue;
    }
    stats.samples.push_back(eval.behavior);
  }
  std::sort(stats.samples.begin(), stats.samples.end());
  const double n = static_cast<double>(stats.samples.size());
  for (double b : stats.samples) stats.mean += b;
  stats.mean /= n;
  for (double b : stats.samples)
    stats.variance += (b - stats.mean) * (b - stats.mean);
  stats.variance /= n;
  return stats;
}

namespace {

// Fraction of sorted values inside [lo, hi], endpoints included.
double fraction_within(const std::vector<double>& sorted, double lo, double hi) {
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
  const auto last = std::upper_bound(sorted.begin(), sorted.end(), hi);
  return static_cast<double>(last - first) / sorted.size();
}

// Smallest radius r (to near machine precision) with coverage(r) >= alpha;
// `coverage` must be monotone non-decreasing.
double bisect_radius(double hi, double alpha,
                     const std::function<double(double)>& coverage) {
  if (coverage(0.0) >= alpha) return 0.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (coverage(mid) >= alpha ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

double sigma_from_alpha_matching(const MarginalStats& stats, double b_star,
                                 double alpha) {
  if (stats.samples.empty()) throw DegenerateMarginal("empty marginal");
  double span = 0.0;
  for (double b : stats.samples) span = std::max(span, std::abs(b - b_star));
  const double hi = (span / kSqrt3) * (1.0 + 1e-12) + 1e-300;
  const double sigma = bisect_radius(hi, alpha, [&](double s) {
    return fraction_within(stats.samples, b_star - kSqrt3 * s, b_star + kSqrt3 * s);
  });
  // All mass exactly at b*: keep the density usable.
  return std::max(sigma, 1e-12 * (1.0 + std::abs(b_star)));
}

double sigma_from_alpha_maximal(const MarginalStats& stats, int sign,
                                double alpha, double* mean_out,
                                double* std_out) {
  if (stats.samples.empty()) throw DegenerateMarginal("empty marginal");
  if (!(stats.variance > 0.0))
    throw DegenerateMarginal("zero-variance marginal: standardization undefined");

  std::vector<double> squashed(stats.samples.size());
  const double mean = sign * stats.mean;
  const double sd = std::sqrt(stats.variance);
  for (std::size_t i = 0; i < stats.samples.size(); ++i)
    squashed[i] = sigmoid((sign * stats.samples[i] - mean) / sd);
  std::sort(squashed.begin(), squashed.end());

  const double hi = ((1.0 - squashed.front()) / kSqrt3) * (1.0 + 1e-12) + 1e-300;
  const double sigma = bisect_radius(hi, alpha, [&](double s) {
    return fraction_within(squashed, 1.0 - kSqrt3 * s, 1.0);
  });
  if (mean_out) *mean_out = mean;
  if (std_out) *std_out = sd;
  return std::max(sigma, 1e-12);
}

Calibration calibrate(const MarginalStats& stats, const BehaviorSpec& spec) {
  Calibration calib;
  calib.mode = spec.mode;
  calib.target = spec.target;
  calib.sign = spec.sign;
  calib.alpha = spec.alpha;
  if (spec.mode == Mode::matching) {
    calib.sigma = sigma_from_alpha_matching(stats, spec.target, spec.alpha);
    calib.marginal_mean = stats.mean;
    calib.marginal_std = std::sqrt(std::max(stats.variance, 0.0));
  } else {
    calib.sigma = sigma_from_alpha_maximal(stats, spec.sign, spec.alpha,
                                           &calib.marginal_mean,
                                           &calib.marginal_std);
  }
  return calib;
}

double log_posterior(const Task2D& task, const EnvParams& env,
                     const RolloutEval& eval, const Calibration& calib,
                     const SamplerConfig& config) {
  if (!task_in_bounds(task, env)) return -kInf;
  // Mirrors the prior's feasibility rejection.
  if (is_obstacle(task, env, env.start) || is_obstacle(task, env, env.goal))
    return -kInf;
  if (eval.plan_failed) return -kInf;
  if (config.reject_failed_rollouts && !eval.traj.reached_goal) return -kInf;
  return calib.loglik(eval.behavior);
}

Proposal propose(const Task2D& task, const GrowthTape& tape,
                 const EnvParams& env, const SamplerConfig& config, Rng& rng) {
  Proposal prop;
  const double box = env.obstacle_box;
  for (int i = 0; i < kObstaclePoints; ++i) {
    for (int axis = 0; axis < 2; ++axis) {
      const double cur = axis == 0 ? task.points[i].x : task.points[i].y;
      const TruncatedNormal forward{cur, config.kernel_sigma, -box, box};
      const double next = forward.sample(rng);
      const TruncatedNormal reverse{next, config.kernel_sigma, -box, box};
      prop.log_q_forward += forward.log_pdf(next);
      prop.log_q_reverse += reverse.log_pdf(cur);
      (axis == 0 ? prop.task.points[i].x : prop.task.points[i].y) = next;
    }
  }
  const double range = 2.0 * env.bound;
  const double tape_sigma = config.tape_sigma_fraction * range;
  prop.tape.entries.reserve(tape.entries.size());
  for (const Vec2& entry : tape.entries) {
    Vec2 moved;
    for (int axis = 0; axis < 2; ++axis) {
      const double cur = axis == 0 ? entry.x : entry.y;
      const TruncatedNormal forward{cur, tape_sigma, -env.bound, env.bound};
      const double next = forward.sample(rng);
      const TruncatedNormal reverse{next, tape_sigma, -env.bound, env.bound};
      prop.log_q_forward += forward.log_pdf(next);
      prop.log_q_reverse += reverse.log_pdf(cur);
      (axis == 0 ? moved.x : moved.y) = next;
    }
    prop.tape.entries.push_back(moved);
  }
  return prop;
}

ChainResult run_chain(const EnvParams& env, ControllerKind kind,
                      const BehaviorDef& behavior, const SamplerConfig& config,
                      const Calibration& calib) {
  config.validate();
  Rng rng(config.seed);
  ChainResult result;
  result.calibration = calib;

  struct State {
    Task2D task;
    GrowthTape tape;
    double behavior = 0.0;
    double log_post = -kInf;
  };

  auto evaluate = [&](const Task2D& task, GrowthTape& tape, RolloutEval& eval) {
    if (config.flat_target) {
      eval = RolloutEval{};
      return task_in_bounds(task, env) ? 0.0 : -kInf;
    }
    eval = evaluate_rollout(env, kind, behavior, task, &tape, config.max_tape, rng);
    return log_posterior(task, env, eval, calib, config);
  };

  // Start from the prior; redraw while the posterior has no density there.
  State cur;
  for (int tries = 0; tries < 100; ++tries) {
    cur.task = sample_prior_task(env, rng);
    cur.tape = GrowthTape{};
    RolloutEval eval;
    cur.log_post = evaluate(cur.task, cur.tape, eval);
    cur.behavior = eval.behavior;
    if (std::isfinite(cur.log_post)) break;
  }

  const int n = config.n_samples;
  result.behavior_trace.reserve(n);
  result.log_ratio_trace.reserve(n);
  result.accept_trace.reserve(n);
  int accepted_count = 0;

  for (int i = 0; i < n; ++i) {
    Proposal prop = propose(cur.task, cur.tape, env, config, rng);
    RolloutEval eval;
    const double log_post_new = evaluate(prop.task, prop.tape, eval);
    if (eval.plan_failed) ++result.plan_failures;
    if (!config.flat_target && !eval.plan_failed && !eval.traj.reached_goal)
      ++result.failed_rollouts;

    double log_ratio =
        (log_post_new + prop.log_q_reverse) - (cur.log_post + prop.log_q_forward);
    if (std::isnan(log_ratio))  // both states zero-density
      log_ratio = -kInf;
    const double u = rng.uniform01();
    const bool accept = std::log(u) < log_ratio;
    if (accept) {
      cur.task = prop.task;
      cur.tape = std::move(prop.tape);
      cur.behavior = eval.behavior;
      cur.log_post = log_post_new;
      ++accepted_count;
    }
    result.behavior_trace.push_back(cur.behavior);
    result.log_ratio_trace.push_back(log_ratio);
    result.accept_trace.push_back(accept ? 1 : 0);

    if (i >= config.burn_in && (i - config.burn_in) % config.thin == 0) {
      ChainSample sample;
      sample.task = cur.task;
      if (kind == ControllerKind::rrt) sample.tape = cur.tape;
      sample.behavior = cur.behavior;
      sample.log_post = cur.log_post;
      sample.accepted = accept;
      result.kept.push_back(std::move(sample));
    }
  }
  result.acceptance_rate = static_cast<double>(accepted_count) / n;
  return result;
}

ChainResult run_chain(const EnvParams& env, ControllerKind kind,
                      const BehaviorSpec& spec, const SamplerConfig& config) {
  spec.validate();
  config.validate();
  const BehaviorDef& behavior = find_behavior(spec.behavior_id);
  Rng rng(config.seed + 0x9e3779b97f4a7c15ull);  // decouple from the chain stream
  const MarginalStats stats = estimate_marginal(env, kind, behavior,
                                                config.n_prior, rng,
                                                config.max_tape);
  const Calibration calib = calibrate(stats, spec);
  return run_chain(env, kind, behavior, config, calib);
}

}  // namespace rocus
