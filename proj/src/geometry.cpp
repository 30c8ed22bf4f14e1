// Copyright 2026 The vortexwm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vortexwm/geometry.hpp"

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

namespace vortexwm {

namespace {

double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

double point_segment_distance(Point2 p, Point2 a, Point2 b, Point2* closest) {
  const Point2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double t = len2 > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  *closest = a + t * ab;
  return distance(p, *closest);
}

// Proper crossing or near-touch of two closed segments.
std::optional<Point2> segment_contact(Point2 a, Point2 b, Point2 c, Point2 d, double tol) {
  const Point2 r = b - a;
  const Point2 s = d - c;
  const double denom = cross(r, s);
  if (denom != 0.0) {
    const double t = cross(c - a, s) / denom;
    const double u = cross(c - a, r) / denom;
    if (t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0) return a + t * r;
  }
  Point2 best{};
  double best_d = tol;
  bool hit = false;
  Point2 q{};
  for (auto [p, s0, s1] : {std::tuple{a, c, d}, std::tuple{b, c, d}, std::tuple{c, a, b}, std::tuple{d, a, b}}) {
    const double dist = point_segment_distance(p, s0, s1, &q);
    if (dist <= best_d) {
      best_d = dist;
      best = 0.5 * (p + q);
      hit = true;
    }
  }
  if (hit) return best;
  return std::nullopt;
}

}  // namespace

int count_self_intersections(std::span<const Point2> v, double tol, bool closed) {
  const std::size_t n = v.size();
  if (n < 4) return 0;
  const std::size_t segments = closed ? n : n - 1;
  auto adjacent = [&](std::size_t i, std::size_t j) {
    if (i == j || i + 1 == j || j + 1 == i) return true;
    return closed && ((i == 0 && j == segments - 1) || (j == 0 && i == segments - 1));
  };
  std::vector<Point2> hits;
  for (std::size_t i = 0; i < segments; ++i) {
    for (std::size_t j = i + 1; j < segments; ++j) {
      if (adjacent(i, j)) continue;
      const auto p = segment_contact(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n], tol);
      if (!p) continue;
      const bool known = std::any_of(hits.begin(), hits.end(), [&](Point2 h) { return distance(h, *p) <= 2.0 * tol; });
      if (!known) hits.push_back(*p);
    }
  }
  return static_cast<int>(hits.size());
}

double winding_number(std::span<const Point2> v, Point2 center) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i] - center;
    const Point2 b = v[(i + 1) % v.size()] - center;
    total += std::atan2(cross(a, b), a.x * b.x + a.y * b.y);
  }
  return total / (2.0 * 3.14159265358979323846);
}

}  // namespace vortexwm
