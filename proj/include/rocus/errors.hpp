#pragma once

#include <stdexcept>
#include <string>

namespace rocus {

// The controller could not produce actions for this task at all.
struct ControllerFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Planner exhausted its sample budget without connecting start to goal.
struct PlanFailure : ControllerFailure {
  using ControllerFailure::ControllerFailure;
};

// Trajectory too short (or collapsed) for the requested behavior.
struct DegenerateTrajectory : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Marginal without spread; maximal-mode standardization is undefined.
struct DegenerateMarginal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rocus
