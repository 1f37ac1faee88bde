#pragma once

#include <string>
#include <vector>

#include "rocus/env2d.hpp"
#include "rocus/grid.hpp"

namespace rocus {

// Arena plot: prior trajectories in blue, posterior in orange, start and
// goal marked. Requires at least one trajectory on each side.
std::string render_trajectories(const std::vector<Trajectory>& prior,
                                const std::vector<Trajectory>& posterior,
                                const EnvParams& params);

// Cellwise posterior-minus-prior obstacle occupancy frequency on the
// shared grid, diverging red (more) / blue (less) around white.
std::string render_density_diff(const std::vector<Task2D>& prior,
                                const std::vector<Task2D>& posterior,
                                const EnvParams& params,
                                const GridSpec& spec = {});

std::vector<double> occupancy_frequency(const std::vector<Task2D>& tasks,
                                        const EnvParams& params,
                                        const GridSpec& spec = {});

// Behavior value against chain iteration.
std::string render_trace(const std::vector<double>& series);

// Overlaid histogram densities; prior blue, posterior orange.
std::string render_density(const std::vector<double>& prior_values,
                           const std::vector<double>& posterior_values,
                           int bins = 40);

// CSV with one row per run: behavior, target, prior mean, posterior mean.
struct SummaryRow {
  std::string behavior;
  std::string target;
  double prior_mean = 0.0;
  double posterior_mean = 0.0;
};

std::string summarize(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary(const std::string& csv);

}  // namespace rocus
