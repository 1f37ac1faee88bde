#include "rocus/behaviors.hpp"

#include <cmath>

namespace rocus {

namespace {

void require_points(const Trajectory& traj, std::size_t n, const char* what) {
  if (traj.positions.size() < n)
    throw DegenerateTrajectory(std::string(what) + " needs at least " +
                               std::to_string(n) + " trajectory points");
}

// Average of per-segment values weighted by segment length over the first
// `count` segments; 0 when nothing moved.
double segment_average(const std::vector<Vec2>& pos, std::size_t count,
                       const std::function<double(std::size_t)>& value) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double ds = distance(pos[k + 1], pos[k]);
    num += value(k) * ds;
    den += ds;
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

double line_integral(const Trajectory& traj, const ScalarField& field,
                     bool normalized) {
  require_points(traj, normalized ? 2 : 1, "line integral");
  double sum = 0.0, len = 0.0;
  for (std::size_t k = 0; k + 1 < traj.positions.size(); ++k) {
    const Vec2 a = traj.positions[k];
    const Vec2 b = traj.positions[k + 1];
    const double ds = distance(a, b);
    sum += field((a + b) * 0.5) * ds;
    len += ds;
  }
  if (!normalized) return sum;
  if (len == 0.0) return field(traj.positions.front());
  return sum / len;
}

double trajectory_length(const Trajectory& traj) {
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < traj.positions.size(); ++k)
    len += distance(traj.positions[k + 1], traj.positions[k]);
  return len;
}

double avg_velocity(const Trajectory& traj) {
  require_points(traj, 2, "avg velocity");
  const auto& p = traj.positions;
  return segment_average(p, p.size() - 1, [&](std::size_t k) {
    return distance(p[k + 1], p[k]);
  });
}

double avg_acceleration(const Trajectory& traj) {
  require_points(traj, 3, "avg acceleration");
  const auto& p = traj.positions;
  return segment_average(p, p.size() - 2, [&](std::size_t k) {
    const Vec2 v0 = p[k + 1] - p[k];
    const Vec2 v1 = p[k + 2] - p[k + 1];
    return norm(v1 - v0);
  });
}

double avg_jerk(const Trajectory& traj) {
  require_points(traj, 4, "avg jerk");
  const auto& p = traj.positions;
  return segment_average(p, p.size() - 3, [&](std::size_t k) {
    const Vec2 a0 = (p[k + 2] - p[k + 1]) - (p[k + 1] - p[k]);
    const Vec2 a1 = (p[k + 3] - p[k + 2]) - (p[k + 2] - p[k + 1]);
    return norm(a1 - a0);
  });
}

double straight_line_deviation(const Trajectory& traj) {
  require_points(traj, 2, "straight-line deviation");
  const Vec2 first = traj.positions.front();
  const Vec2 chord = traj.positions.back() - first;
  const double chord_len = norm(chord);
  if (chord_len == 0.0)
    throw DegenerateTrajectory("straight-line deviation undefined: start equals end");
  // |cross| / |chord| is the perpendicular distance to the chord line.
  return line_integral(
      traj,
      [&](Vec2 x) { return std::abs(cross(x - first, chord)) / chord_len; },
      true);
}

double obstacle_clearance(const Trajectory& traj, const DistanceField& dfield) {
  require_points(traj, 1, "obstacle clearance");
  if (traj.positions.size() == 1) return dfield.sample(traj.positions.front());
  return line_integral(traj, [&](Vec2 x) { return dfield.sample(x); }, true);
}

double near_obstacle_velocity(const Trajectory& traj,
                              const DistanceField& dfield) {
  require_points(traj, 2, "near-obstacle velocity");
  constexpr double kDistanceFloor = 1e-3;
  const auto& p = traj.positions;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double ds = distance(p[k + 1], p[k]);
    const double speed = ds;  // dt = 1
    const double d =
        std::max(dfield.sample((p[k] + p[k + 1]) * 0.5), kDistanceFloor);
    num += speed / d * ds;
    den += 1.0 / d * ds;
  }
  return den > 0.0 ? num / den : 0.0;
}

double legibility(const Trajectory& traj, Vec2 goal) {
  require_points(traj, 2, "legibility");
  const auto& p = traj.positions;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const Vec2 v = p[k + 1] - p[k];
    const double ds = norm(v);
    if (ds == 0.0) continue;  // stationary segments carry no length
    const Vec2 to_goal = goal - (p[k] + p[k + 1]) * 0.5;
    const double denom_sq = norm_sq(v) * norm_sq(to_goal);
    if (denom_sq == 0.0) continue;  // midpoint on the goal itself
    const double c = clamp(dot(v, to_goal) / std::sqrt(denom_sq), -1.0, 1.0);
    num += c * ds;
    den += ds;
  }
  return den > 0.0 ? num / den : 0.0;
}

const std::vector<BehaviorDef>& behavior_registry() {
  static const std::vector<BehaviorDef> defs = {
      {"length", false,
       [](const Trajectory& t, const BehaviorEnv&) { return trajectory_length(t); }},
      {"avg_vel", false,
       [](const Trajectory& t, const BehaviorEnv&) { return avg_velocity(t); }},
      {"avg_acc", false,
       [](const Trajectory& t, const BehaviorEnv&) { return avg_acceleration(t); }},
      {"avg_jerk", false,
       [](const Trajectory& t, const BehaviorEnv&) { return avg_jerk(t); }},
      {"straight_dev", false,
       [](const Trajectory& t, const BehaviorEnv&) { return straight_line_deviation(t); }},
      {"clearance", true,
       [](const Trajectory& t, const BehaviorEnv& e) {
         return obstacle_clearance(t, *e.dfield);
       }},
      {"near_obs_vel", true,
       [](const Trajectory& t, const BehaviorEnv& e) {
         return near_obstacle_velocity(t, *e.dfield);
       }},
      {"legibility", false,
       [](const Trajectory& t, const BehaviorEnv& e) {
         return legibility(t, e.params.goal);
       }},
  };
  return defs;
}

const BehaviorDef& find_behavior(std::string_view id) {
  for (const BehaviorDef& def : behavior_registry())
    if (def.id == id) return def;
  throw ConfigError("unknown behavior id: " + std::string(id));
}

}  // namespace rocus
