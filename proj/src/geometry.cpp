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

#include "nirsplan/geometry.hpp"

#include <algorithm>

namespace nirsplan {

namespace {

// Orientation with a tolerance scaled to the operand magnitudes.
int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double v = cross(ab, ac);
  const double scale = std::max({norm(ab) * norm(ac), 1e-300});
  if (std::abs(v) <= 1e-12 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const double tol = 1e-12 * std::max(1.0, norm(b - a));
  return p.x >= std::min(a.x, b.x) - tol && p.x <= std::max(a.x, b.x) + tol &&
         p.y >= std::min(a.y, b.y) - tol && p.y <= std::max(a.y, b.y) + tol;
}

}  // namespace

double wrap_angle(double radians) {
  double r = std::remainder(radians, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

Vec2 mirror_across_line(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 dir = normalized(b - a);
  const Vec2 foot = a + dot(p - a, dir) * dir;
  return 2.0 * foot - p;
}

std::optional<Vec2> segment_crossing(Vec2 from, Vec2 to, Vec2 a, Vec2 b) {
  const Vec2 r = to - from;
  const Vec2 s = b - a;
  const double den = cross(r, s);
  if (std::abs(den) <= 1e-15 * norm(r) * norm(s)) return std::nullopt;
  const double t = cross(a - from, s) / den;
  const double u = cross(a - from, r) / den;
  constexpr double kOpen = 1e-12;
  if (t <= kOpen || t >= 1.0 - kOpen) return std::nullopt;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  return from + t * r;
}

int side_of_line(Vec2 p, Vec2 a, Vec2 b, double tol) {
  const Vec2 ab = b - a;
  const double v = cross(ab, p - a);
  const double scale = norm(ab);
  if (std::abs(v) <= tol * std::max(scale, 1.0)) return 0;
  return v > 0 ? 1 : -1;
}

}  // namespace nirsplan
