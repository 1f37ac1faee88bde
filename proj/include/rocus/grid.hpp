#pragma once

#include <cstdint>
#include <vector>

#include "rocus/env2d.hpp"
#include "rocus/geometry.hpp"

namespace rocus {

inline constexpr int kGridResolution = 150;

// Square cell grid over [lo, hi]^2, (ix, iy) indexed, row-major in iy.
struct GridSpec {
  int resolution = kGridResolution;
  double lo = -1.2;
  double hi = 1.2;

  double cell_size() const { return (hi - lo) / resolution; }
  double cell_diagonal() const { return cell_size() * 1.4142135623730951; }
  Vec2 cell_center(int ix, int iy) const {
    const double c = cell_size();
    return {lo + (ix + 0.5) * c, lo + (iy + 0.5) * c};
  }
  // Nearest cell containing p, clamped to the grid.
  int cell_x(double x) const {
    const int i = static_cast<int>(std::floor((x - lo) / cell_size()));
    return std::min(std::max(i, 0), resolution - 1);
  }
  bool contains(Vec2 p) const {
    return p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi;
  }
  int index(int ix, int iy) const { return iy * resolution + ix; }
  int size() const { return resolution * resolution; }
};

struct OccupancyGrid {
  GridSpec spec;
  std::vector<std::uint8_t> occupied;  // spec.size() cells

  bool at(int ix, int iy) const { return occupied[spec.index(ix, iy)] != 0; }
};

OccupancyGrid rasterize_occupancy(const Task2D& task, const EnvParams& params,
                                  const GridSpec& spec = {});

// 4-connected components over occupied cells; label -1 marks free cells.
struct ComponentLabels {
  GridSpec spec;
  std::vector<int> label;
  int count = 0;
};

ComponentLabels flood_fill_components(const OccupancyGrid& grid);

// Euclidean distance to the nearest obstacle cell center, exact on the
// lattice, bilinearly interpolated between cell centers.
struct DistanceField {
  GridSpec spec;
  std::vector<double> dist;  // workspace units at cell centers
  bool obstacle_free = false;

  double at(int ix, int iy) const { return dist[spec.index(ix, iy)]; }
  double sample(Vec2 p) const;
  double max_value() const;
};

DistanceField build_distance_field(const OccupancyGrid& grid);

}  // namespace rocus
