#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rocus/behaviors.hpp"
#include "rocus/env2d.hpp"
#include "rocus/rrt.hpp"

namespace rocus {

enum class Mode { matching, maximal };
enum class ControllerKind { ds, rrt };

// What to look for: a target behavior value (matching) or an extreme
// (maximal, sign +1 for largest / -1 for smallest), with the posterior
// relaxation covering a prior-mass fraction alpha.
struct BehaviorSpec {
  std::string behavior_id;
  Mode mode = Mode::matching;
  double target = 0.0;  // matching only
  int sign = +1;        // maximal only
  double alpha = 0.01;

  void validate() const;
};

struct MarginalStats {
  std::vector<double> samples;  // sorted ascending
  double mean = 0.0;
  double variance = 0.0;
  int skipped = 0;  // controller failures during estimation
};

// Everything needed to evaluate the relaxed log-likelihood of a raw
// behavior value. For maximal mode the marginal moments refer to the
// sign-adjusted behavior.
struct Calibration {
  Mode mode = Mode::matching;
  double target = 0.0;
  int sign = +1;
  double alpha = 0.0;
  double sigma = 0.0;
  double marginal_mean = 0.0;
  double marginal_std = 1.0;

  double loglik(double behavior) const;
};

struct SamplerConfig {
  int n_samples = 10000;
  int burn_in = 5000;
  int thin = 1;
  double kernel_sigma = 0.1;         // per obstacle coordinate
  double tape_sigma_fraction = 0.1;  // of the configuration range
  std::uint64_t seed = 0;
  bool reject_failed_rollouts = true;
  std::size_t max_tape = 10000;
  int n_prior = 1000;  // calibration rollouts
  bool flat_target = false;  // diagnostic: no rollouts, uniform target

  void validate() const;
};

struct ChainSample {
  Task2D task;
  std::optional<GrowthTape> tape;
  double behavior = 0.0;
  double log_post = 0.0;
  bool accepted = false;
};

struct ChainResult {
  std::vector<ChainSample> kept;          // after burn-in and thinning
  std::vector<double> behavior_trace;     // one entry per iteration
  std::vector<double> log_ratio_trace;    // raw MH log acceptance ratio
  std::vector<std::uint8_t> accept_trace;
  double acceptance_rate = 0.0;
  int plan_failures = 0;
  int failed_rollouts = 0;
  Calibration calibration;
};

// One controller rollout plus behavior evaluation on a fixed task. The
// tape is required (and consumed/extended) for the RRT controller.
struct RolloutEval {
  Trajectory traj;
  double behavior = 0.0;
  bool plan_failed = false;
};

RolloutEval evaluate_rollout(const EnvParams& env, ControllerKind kind,
                             const BehaviorDef& behavior, const Task2D& task,
                             GrowthTape* tape, std::size_t max_tape, Rng& rng);

// Prior behavior marginal from n_prior rollouts.
MarginalStats estimate_marginal(const EnvParams& env, ControllerKind kind,
                                const BehaviorDef& behavior, int n_prior,
                                Rng& rng, std::size_t max_tape = 10000);

// Smallest sigma for which [b* - sqrt(3) sigma, b* + sqrt(3) sigma] holds
// at least an alpha fraction of the marginal samples.
double sigma_from_alpha_matching(const MarginalStats& stats, double b_star,
                                 double alpha);

// Standardize, squash through the sigmoid, then find the smallest sigma
// for which [1 - sqrt(3) sigma, 1] holds at least an alpha fraction.
// Throws DegenerateMarginal on zero variance.
double sigma_from_alpha_maximal(const MarginalStats& stats, int sign,
                                double alpha, double* mean_out,
                                double* std_out);

Calibration calibrate(const MarginalStats& stats, const BehaviorSpec& spec);

// Relaxed posterior log-density up to the uniform-prior constant; -inf on
// zero-density states (out-of-box tasks, plan failures, and failed
// rollouts when configured to reject them).
double log_posterior(const Task2D& task, const EnvParams& env,
                     const RolloutEval& eval, const Calibration& calib,
                     const SamplerConfig& config);

struct Proposal {
  Task2D task;
  GrowthTape tape;
  double log_q_forward = 0.0;
  double log_q_reverse = 0.0;
};

// Truncated-Gaussian drift on every obstacle coordinate and every
// instantiated tape entry. Both proposal densities are returned; they
// differ near the truncation boundaries.
Proposal propose(const Task2D& task, const GrowthTape& tape,
                 const EnvParams& env, const SamplerConfig& config, Rng& rng);

// Metropolis-Hastings over tasks (DS) or tasks plus growth tapes (RRT).
// Records exactly n_samples states; rejected proposals repeat the current
// state. Burn-in and thinning shape `kept` only.
ChainResult run_chain(const EnvParams& env, ControllerKind kind,
                      const BehaviorDef& behavior, const SamplerConfig& config,
                      const Calibration& calib);

// Convenience: resolves the behavior from the registry and calibrates from
// a fresh prior marginal first.
ChainResult run_chain(const EnvParams& env, ControllerKind kind,
                      const BehaviorSpec& spec, const SamplerConfig& config);

}  // namespace rocus
