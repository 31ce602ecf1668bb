// Copyright 2026 The nirsplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <optional>

namespace nirsplan {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return {a.x / n, a.y / n};
}
// Counter-clockwise perpendicular.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double heading(Vec2 a) { return std::atan2(a.y, a.x); }

// Wraps an angle to (-pi, pi].
double wrap_angle(double radians);

// Axis-aligned rectangle in meters.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(Vec2 p, double tol = 1e-9) const {
    return p.x >= x_min - tol && p.x <= x_max + tol && p.y >= y_min - tol &&
           p.y <= y_max + tol;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Closed-segment intersection test: touching endpoints and collinear overlap
// both count as intersecting.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Mirror image of `p` across the infinite line through a and b.
Vec2 mirror_across_line(Vec2 p, Vec2 a, Vec2 b);

// Intersection of the open segment (from, to) with the closed segment [a, b].
// Returns the intersection point, or nullopt when they do not cross or are
// parallel.
std::optional<Vec2> segment_crossing(Vec2 from, Vec2 to, Vec2 a, Vec2 b);

// Signed side of p relative to the directed line a->b: +1 left, -1 right,
// 0 when within `tol` of the line.
int side_of_line(Vec2 p, Vec2 a, Vec2 b, double tol = 1e-12);

}  // namespace nirsplan
