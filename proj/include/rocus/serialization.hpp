#pragma once

#include <json.hpp>

#include "rocus/baseline.hpp"
#include "rocus/sampler.hpp"

namespace rocus {

using Json = nlohmann::json;

// Task2D travels as a flat list of 30 numbers (x1, y1, ..., x15, y15).
Json task_to_json(const Task2D& task);
Task2D task_from_json(const Json& j);

// Trajectories are arrays of [x, y] pairs.
Json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const Json& j);

// Tapes carry their entries plus the consumed-prefix cursor so a chain can
// be resumed or replayed exactly.
Json tape_to_json(const GrowthTape& tape);
GrowthTape tape_from_json(const Json& j);

Json chain_sample_to_json(const ChainSample& sample);
ChainSample chain_sample_from_json(const Json& j);

Json marginal_to_json(const MarginalStats& stats);
MarginalStats marginal_from_json(const Json& j);

Json calibration_to_json(const Calibration& calib);
Calibration calibration_from_json(const Json& j);

// Occupancy grid plus star polygons, for external plotting.
Json env_debug_json(const Task2D& task, const EnvParams& params);

}  // namespace rocus
