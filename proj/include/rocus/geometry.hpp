#pragma once

#include <algorithm>
#include <cmath>

namespace rocus {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm_sq(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(norm_sq(v)); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline double norm_inf(Vec2 v) { return std::max(std::abs(v.x), std::abs(v.y)); }

// 90-degree counterclockwise rotation.
inline Vec2 perpendicular(Vec2 v) { return {-v.y, v.x}; }

// Zero vector maps to zero.
inline Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{};
}

inline double clamp(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

inline Vec2 clamp_box(Vec2 v, double lo, double hi) {
  return {clamp(v.x, lo, hi), clamp(v.y, lo, hi)};
}

}  // namespace rocus
