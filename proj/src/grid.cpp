#include "rocus/grid.hpp"

#include <algorithm>
#include <cmath>

namespace rocus {

OccupancyGrid rasterize_occupancy(const Task2D& task, const EnvParams& params,
                                  const GridSpec& spec) {
  OccupancyGrid grid{spec, std::vector<std::uint8_t>(spec.size(), 0)};
  for (int iy = 0; iy < spec.resolution; ++iy)
    for (int ix = 0; ix < spec.resolution; ++ix)
      if (is_obstacle(task, params, spec.cell_center(ix, iy)))
        grid.occupied[spec.index(ix, iy)] = 1;
  return grid;
}

ComponentLabels flood_fill_components(const OccupancyGrid& grid) {
  const GridSpec& spec = grid.spec;
  ComponentLabels out{spec, std::vector<int>(spec.size(), -1), 0};
  std::vector<int> stack;
  for (int start = 0; start < spec.size(); ++start) {
    if (grid.occupied[start] == 0 || out.label[start] != -1) continue;
    const int comp = out.count++;
    stack.push_back(start);
    out.label[start] = comp;
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      const int ix = idx % spec.resolution;
      const int iy = idx / spec.resolution;
      const int nbrs[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
      for (const auto& n : nbrs) {
        if (n[0] < 0 || n[0] >= spec.resolution || n[1] < 0 || n[1] >= spec.resolution)
          continue;
        const int nidx = spec.index(n[0], n[1]);
        if (grid.occupied[nidx] != 0 && out.label[nidx] == -1) {
          out.label[nidx] = comp;
          stack.push_back(nidx);
        }
      }
    }
  }
  return out;
}

namespace {

// Stand-in for +inf; far above any reachable squared cell distance.
constexpr double kFar = 1e12;

// 1D squared distance transform: lower envelope of parabolas rooted at f.
void transform_1d(const std::vector<double>& f, int n, std::vector<double>& d,
                  std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

DistanceField build_distance_field(const OccupancyGrid& grid) {
  const GridSpec& spec = grid.spec;
  const int n = spec.resolution;
  DistanceField field{spec, std::vector<double>(spec.size(), kFar), false};

  bool any = false;
  for (int i = 0; i < spec.size(); ++i) {
    if (grid.occupied[i] != 0) {
      field.dist[i] = 0.0;
      any = true;
    }
  }
  if (!any) {
    // No obstacle anywhere; report the arena half-diagonal everywhere.
    const double half_diag = 0.5 * (spec.hi - spec.lo) * 1.4142135623730951;
    std::fill(field.dist.begin(), field.dist.end(), half_diag);
    field.obstacle_free = true;
    return field;
  }

  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  // Columns, then rows; result is exact squared Euclidean in cell units.
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) f[iy] = field.dist[spec.index(ix, iy)];
    transform_1d(f, n, d, v, z);
    for (int iy = 0; iy < n; ++iy) field.dist[spec.index(ix, iy)] = d[iy];
  }
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) f[ix] = field.dist[spec.index(ix, iy)];
    transform_1d(f, n, d, v, z);
    for (int ix = 0; ix < n; ++ix) field.dist[spec.index(ix, iy)] = d[ix];
  }
  const double cell = spec.cell_size();
  for (double& dv : field.dist) dv = cell * std::sqrt(dv);
  return field;
}

double DistanceField::sample(Vec2 p) const {
  const double cell = spec.cell_size();
  const double ux = (p.x - spec.lo) / cell - 0.5;
  const double uy = (p.y - spec.lo) / cell - 0.5;
  const int n = spec.resolution;
  const int x0 = std::min(std::max(static_cast<int>(std::floor(ux)), 0), n - 1);
  const int y0 = std::min(std::max(static_cast<int>(std::floor(uy)), 0), n - 1);
  const int x1 = std::min(x0 + 1, n - 1);
  const int y1 = std::min(y0 + 1, n - 1);
  const double tx = clamp(ux - x0, 0.0, 1.0);
  const double ty = clamp(uy - y0, 0.0, 1.0);
  const double a = at(x0, y0) * (1.0 - tx) + at(x1, y0) * tx;
  const double b = at(x0, y1) * (1.0 - tx) + at(x1, y1) * tx;
  return a * (1.0 - ty) + b * ty;
}

double DistanceField::max_value() const {
  double m = 0.0;
  for (double dv : dist) m = std::max(m, dv);
  return m;
}

}  // namespace rocus
