#include "rocus/serialization.hpp"

#include "rocus/ds.hpp"
#include "rocus/grid.hpp"

namespace rocus {

Json task_to_json(const Task2D& task) {
  Json flat = Json::array();
  for (const Vec2& p : task.points) {
    flat.push_back(p.x);
    flat.push_back(p.y);
  }
  return flat;
}

Task2D task_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 * kObstaclePoints)
    throw ConfigError("task must be a flat list of " +
                      std::to_string(2 * kObstaclePoints) + " numbers");
  Task2D task;
  for (int i = 0; i < kObstaclePoints; ++i)
    task.points[i] = {j[2 * i].get<double>(), j[2 * i + 1].get<double>()};
  return task;
}

Json trajectory_to_json(const Trajectory& traj) {
  Json pts = Json::array();
  for (const Vec2& p : traj.positions) pts.push_back(Json::array({p.x, p.y}));
  return pts;
}

Trajectory trajectory_from_json(const Json& j) {
  Trajectory traj;
  for (const Json& p : j)
    traj.positions.push_back({p[0].get<double>(), p[1].get<double>()});
  return traj;
}

Json tape_to_json(const GrowthTape& tape) {
  Json entries = Json::array();
  for (const Vec2& e : tape.entries) entries.push_back(Json::array({e.x, e.y}));
  return Json{{"entries", entries}, {"cursor", tape.cursor}};
}

GrowthTape tape_from_json(const Json& j) {
  GrowthTape tape;
  for (const Json& e : j.at("entries"))
    tape.entries.push_back({e[0].get<double>(), e[1].get<double>()});
  tape.cursor = j.at("cursor").get<std::size_t>();
  return tape;
}

Json chain_sample_to_json(const ChainSample& sample) {
  Json j{{"task", task_to_json(sample.task)},
         {"behavior", sample.behavior},
         {"log_post", sample.log_post},
         {"accepted", sample.accepted}};
  if (sample.tape) j["tape"] = tape_to_json(*sample.tape);
  return j;
}

ChainSample chain_sample_from_json(const Json& j) {
  ChainSample sample;
  sample.task = task_from_json(j.at("task"));
  sample.behavior = j.at("behavior").get<double>();
  sample.log_post = j.at("log_post").get<double>();
  sample.accepted = j.at("accepted").get<bool>();
  if (j.contains("tape")) sample.tape = tape_from_json(j.at("tape"));
  return sample;
}

Json marginal_to_json(const MarginalStats& stats) {
  return Json{{"samples", stats.samples},
              {"mean", stats.mean},
              {"variance", stats.variance},
              {"skipped", stats.skipped}};
}

MarginalStats marginal_from_json(const Json& j) {
  MarginalStats stats;
  stats.samples = j.at("samples").get<std::vector<double>>();
  stats.mean = j.at("mean").get<double>();
  stats.variance = j.at("variance").get<double>();
  stats.skipped = j.at("skipped").get<int>();
  return stats;
}

Json calibration_to_json(const Calibration& calib) {
  return Json{{"mode", calib.mode == Mode::matching ? "matching" : "maximal"},
              {"target", calib.target},
              {"sign", calib.sign},
              {"alpha", calib.alpha},
              {"sigma", calib.sigma},
              {"marginal_mean", calib.marginal_mean},
              {"marginal_std", calib.marginal_std}};
}

Calibration calibration_from_json(const Json& j) {
  Calibration calib;
  calib.mode = j.at("mode").get<std::string>() == "matching" ? Mode::matching
                                                             : Mode::maximal;
  calib.target = j.at("target").get<double>();
  calib.sign = j.at("sign").get<int>();
  calib.alpha = j.at("alpha").get<double>();
  calib.sigma = j.at("sigma").get<double>();
  calib.marginal_mean = j.at("marginal_mean").get<double>();
  calib.marginal_std = j.at("marginal_std").get<double>();
  return calib;
}

Json env_debug_json(const Task2D& task, const EnvParams& params) {
  const OccupancyGrid grid = rasterize_occupancy(task, params);
  Json rows = Json::array();
  for (int iy = 0; iy < grid.spec.resolution; ++iy) {
    std::string row(grid.spec.resolution, '0');
    for (int ix = 0; ix < grid.spec.resolution; ++ix)
      if (grid.at(ix, iy)) row[ix] = '1';
    rows.push_back(row);
  }
  Json polygons = Json::array();
  for (const StarObstacle& obs : extract_obstacles(grid)) {
    Json verts = Json::array();
    for (int k = 0; k < kStarRays; ++k) {
      const Vec2 v = obs.vertex(k);
      verts.push_back(Json::array({v.x, v.y}));
    }
    polygons.push_back(Json{{"reference", Json::array({obs.reference.x, obs.reference.y})},
                            {"vertices", verts}});
  }
  return Json{{"resolution", grid.spec.resolution},
              {"lo", grid.spec.lo},
              {"hi", grid.spec.hi},
              {"occupancy_rows", rows},
              {"obstacles", polygons}};
}

}  // namespace rocus
