#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rocus/baseline.hpp"
#include "rocus/ds.hpp"
#include "rocus/grid.hpp"
#include "rocus/sampler.hpp"

namespace py = pybind11;
using namespace rocus;

namespace {

Task2D task_from_flat(const std::vector<double>& flat) {
  if (flat.size() != 2 * kObstaclePoints)
    throw py::value_error("task needs exactly " +
                          std::to_string(2 * kObstaclePoints) + " numbers");
  Task2D task;
  for (int i = 0; i < kObstaclePoints; ++i)
    task.points[i] = {flat[2 * i], flat[2 * i + 1]};
  return task;
}

std::vector<double> task_to_flat(const Task2D& task) {
  std::vector<double> flat;
  flat.reserve(2 * kObstaclePoints);
  for (const Vec2& p : task.points) {
    flat.push_back(p.x);
    flat.push_back(p.y);
  }
  return flat;
}

BehaviorSpec make_spec(const std::string& behavior, const std::string& mode,
                       double target, int sign, double alpha) {
  BehaviorSpec spec;
  spec.behavior_id = behavior;
  if (mode == "matching") {
    spec.mode = Mode::matching;
    spec.target = target;
  } else if (mode == "maximal") {
    spec.mode = Mode::maximal;
    spec.sign = sign;
  } else {
    throw py::value_error("mode must be 'matching' or 'maximal'");
  }
  spec.alpha = alpha;
  spec.validate();
  return spec;
}

ControllerKind kind_of(const std::string& controller) {
  if (controller == "ds") return ControllerKind::ds;
  if (controller == "rrt") return ControllerKind::rrt;
  throw py::value_error("controller must be 'ds' or 'rrt'");
}

py::dict rollout_dict(const EnvParams& env, ControllerKind kind,
                      const Task2D& task, std::uint64_t seed) {
  Rng rng(seed);
  Controller controller;
  GrowthTape tape;
  if (kind == ControllerKind::ds)
    controller = ds_policy(task, env);
  else
    controller = rrt_policy(task, env, tape, 10000, rng);
  const Trajectory traj = rollout(controller, task, env);
  std::vector<std::pair<double, double>> positions;
  positions.reserve(traj.positions.size());
  for (const Vec2& p : traj.positions) positions.emplace_back(p.x, p.y);
  py::dict out;
  out["positions"] = positions;
  out["reached_goal"] = traj.reached_goal;
  return out;
}

}  // namespace

PYBIND11_MODULE(rocus, m) {
  m.doc() = "Behavior-conditioned posterior sampling over 2D navigation "
            "tasks for DS and RRT controllers";

  const EnvParams env;
  m.attr("N_OBSTACLE_POINTS") = kObstaclePoints;
  m.attr("GRID_RESOLUTION") = kGridResolution;

  m.def(
      "sample_prior_task",
      [env](std::uint64_t seed) {
        Rng rng(seed);
        return task_to_flat(sample_prior_task(env, rng));
      },
      py::arg("seed"),
      "Draw one prior task as a flat [x1, y1, ..., x15, y15] list.");

  m.def(
      "rollout",
      [env](const std::string& controller, const std::vector<double>& task,
            std::uint64_t seed) {
        return rollout_dict(env, kind_of(controller), task_from_flat(task), seed);
      },
      py::arg("controller"), py::arg("task"), py::arg("seed") = 0,
      "Roll the controller ('ds' or 'rrt') out on a task; the seed only "
      "matters for RRT.");

  m.def("behavior_ids", [] {
    std::vector<std::string> ids;
    for (const BehaviorDef& def : behavior_registry()) ids.push_back(def.id);
    return ids;
  });

  m.def(
      "evaluate_behavior",
      [env](const std::string& behavior,
            const std::vector<std::pair<double, double>>& positions,
            const std::vector<double>& task, bool reached_goal) {
        const BehaviorDef& def = find_behavior(behavior);
        Trajectory traj;
        traj.reached_goal = reached_goal;
        for (const auto& [x, y] : positions) traj.positions.push_back({x, y});
        const Task2D t = task_from_flat(task);
        DistanceField dfield;
        BehaviorEnv benv{t, env, nullptr};
        if (def.needs_distance_field) {
          dfield = build_distance_field(rasterize_occupancy(t, env));
          benv.dfield = &dfield;
        }
        return def.eval(traj, benv);
      },
      py::arg("behavior"), py::arg("positions"), py::arg("task"),
      py::arg("reached_goal") = true);

  m.def(
      "calibrate",
      [env](const std::string& controller, const std::string& behavior,
            const std::string& mode, double target, int sign, double alpha,
            int n_prior, std::uint64_t seed) {
        const BehaviorSpec spec = make_spec(behavior, mode, target, sign, alpha);
        Rng rng(seed);
        const MarginalStats stats = estimate_marginal(
            env, kind_of(controller), find_behavior(behavior), n_prior, rng);
        const Calibration calib = calibrate(stats, spec);
        py::dict out;
        out["prior_mean"] = stats.mean;
        out["prior_variance"] = stats.variance;
        out["sigma"] = calib.sigma;
        out["skipped"] = stats.skipped;
        return out;
      },
      py::arg("controller"), py::arg("behavior"), py::arg("mode") = "matching",
      py::arg("target") = 0.0, py::arg("sign") = 1, py::arg("alpha") = 0.01,
      py::arg("n_prior") = 1000, py::arg("seed") = 0);

  m.def(
      "run_chain",
      [env](const std::string& controller, const std::string& behavior,
            const std::string& mode, double target, int sign, double alpha,
            int n_samples, int burn_in, int thin, int n_prior,
            std::uint64_t seed, bool reject_failed_rollouts) {
        const BehaviorSpec spec = make_spec(behavior, mode, target, sign, alpha);
        SamplerConfig config;
        config.n_samples = n_samples;
        config.burn_in = burn_in;
        config.thin = thin;
        config.n_prior = n_prior;
        config.seed = seed;
        config.reject_failed_rollouts = reject_failed_rollouts;
        const ChainResult result =
            run_chain(env, kind_of(controller), spec, config);
        py::list samples;
        for (const ChainSample& s : result.kept) {
          py::dict d;
          d["task"] = task_to_flat(s.task);
          d["behavior"] = s.behavior;
          d["log_post"] = s.log_post;
          d["accepted"] = s.accepted;
          samples.append(d);
        }
        py::dict out;
        out["samples"] = samples;
        out["acceptance_rate"] = result.acceptance_rate;
        out["sigma"] = result.calibration.sigma;
        out["behavior_trace"] = result.behavior_trace;
        return out;
      },
      py::arg("controller"), py::arg("behavior"), py::arg("mode") = "matching",
      py::arg("target") = 0.0, py::arg("sign") = 1, py::arg("alpha") = 0.01,
      py::arg("n_samples") = 1000, py::arg("burn_in") = 200,
      py::arg("thin") = 1, py::arg("n_prior") = 200, py::arg("seed") = 0,
      py::arg("reject_failed_rollouts") = true);

  m.def(
      "top_k_select",
      [env](const std::string& controller, const std::string& behavior,
            const std::string& mode, double target, int sign, int pool,
            int k, std::uint64_t seed) {
        const BehaviorSpec spec = make_spec(behavior, mode, target, sign, 0.01);
        Rng rng(seed);
        const TopKResult result =
            top_k_select(env, kind_of(controller), spec, pool, k, rng);
        py::dict out;
        std::vector<double> selected;
        for (const PoolEntry& e : result.selected) selected.push_back(e.behavior);
        out["selected_values"] = selected;
        out["pool_values"] = result.pool_values;
        out["threshold"] = result.threshold;
        return out;
      },
      py::arg("controller"), py::arg("behavior"), py::arg("mode") = "matching",
      py::arg("target") = 0.0, py::arg("sign") = 1, py::arg("pool") = 200,
      py::arg("k") = 10, py::arg("seed") = 0);
}
