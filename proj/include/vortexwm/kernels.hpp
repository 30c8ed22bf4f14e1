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

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version that must agree bit for bit: work is split by scanline and
// every reduction is finished serially in row order, so the result never
// depends on the thread count or schedule.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "vortexwm/geometry.hpp"

namespace vortexwm {

/// Square-pixel grid. Pixel (row, col) has its centre at
/// (center.x + (col - (width-1)/2) pitch, center.y + (row - (height-1)/2) pitch);
/// storage is row-major.
struct PixelGrid {
  int width = 0;
  int height = 0;
  double pitch = 1.0;
  Point2 center;

  double x(int col) const { return center.x + (col - 0.5 * (width - 1)) * pitch; }
  double y(int row) const { return center.y + (row - 0.5 * (height - 1)) * pitch; }
  std::size_t size() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
  }
};

using FieldFn = std::function<std::complex<double>(double, double)>;

/// Sums of I, x I and y I over the grid (no pixel-area factor).
struct Moments {
  double mass = 0.0;
  double mx = 0.0;
  double my = 0.0;
};

/// Counter-based generator: the stream for pixel k depends only on
/// (seed, k), so draws are independent of evaluation order.
class PixelRng {
 public:
  using result_type = std::uint64_t;
  PixelRng(std::uint64_t seed, std::uint64_t counter);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t state_;
};

namespace kernels::serial {

void render_intensity(const FieldFn& field, const PixelGrid& grid, std::span<double> out);
Moments intensity_moments(const FieldFn& field, const PixelGrid& grid);
/// out[k] ~ Poisson(means[k]); means must be >= 0.
void poisson_counts(std::span<const double> means, std::uint64_t seed, std::span<double> out);

}  // namespace kernels::serial

namespace kernels::parallel {

/// `threads` <= 0 uses the OpenMP default.
void render_intensity(const FieldFn& field, const PixelGrid& grid, std::span<double> out, int threads = 0);
Moments intensity_moments(const FieldFn& field, const PixelGrid& grid, int threads = 0);
void poisson_counts(std::span<const double> means, std::uint64_t seed, std::span<double> out, int threads = 0);

}  // namespace kernels::parallel

}  // namespace vortexwm
