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

#pragma once

#include <cmath>
#include <span>

namespace vortexwm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
  double norm() const { return std::hypot(x, y); }
};

inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

/// Number of distinct self-intersection points of a polyline.
///
/// Non-adjacent segments that touch or cross contribute an intersection
/// point; points closer than `tol` are merged, so a curve that passes twice
/// through the same sample counts once. `closed` joins the last vertex to the
/// first.
int count_self_intersections(std::span<const Point2> vertices, double tol, bool closed = true);

/// Signed number of turns of a closed polyline around `center`.
double winding_number(std::span<const Point2> vertices, Point2 center);

}  // namespace vortexwm
