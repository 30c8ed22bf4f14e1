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

#include "vortexwm/kernels.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include <omp.h>

namespace vortexwm {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void check_size(const PixelGrid& grid, std::size_t n) {
  if (n != grid.size()) throw std::invalid_argument("output span does not match grid size");
}

inline void render_row(const FieldFn& field, const PixelGrid& grid, int row, std::span<double> out) {
  const double y = grid.y(row);
  const std::size_t base = grid.index(row, 0);
  for (int col = 0; col < grid.width; ++col) out[base + col] = std::norm(field(grid.x(col), y));
}

inline Moments row_moments(const FieldFn& field, const PixelGrid& grid, int row) {
  const double y = grid.y(row);
  Moments m;
  for (int col = 0; col < grid.width; ++col) {
    const double x = grid.x(col);
    const double v = std::norm(field(x, y));
    m.mass += v;
    m.mx += x * v;
  }
  m.my = y * m.mass;
  return m;
}

Moments reduce_rows(const std::vector<Moments>& rows) {
  Moments total;
  for (const auto& r : rows) {
    total.mass += r.mass;
    total.mx += r.mx;
    total.my += r.my;
  }
  return total;
}

inline double poisson_draw(double mean, std::uint64_t seed, std::size_t k) {
  if (!(mean >= 0.0)) throw std::invalid_argument("Poisson mean must be non-negative");
  if (mean == 0.0) return 0.0;
  PixelRng rng(seed, k);
  std::poisson_distribution<long long> dist(mean);
  return static_cast<double>(dist(rng));
}

int thread_count(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

PixelRng::PixelRng(std::uint64_t seed, std::uint64_t counter)
    : state_(splitmix(seed ^ 0x9e3779b97f4a7c15ULL) ^ splitmix(counter + 0xd1b54a32d192ed03ULL)) {}

PixelRng::result_type PixelRng::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix(state_);
}

namespace kernels::serial {

void render_intensity(const FieldFn& field, const PixelGrid& grid, std::span<double> out) {
  check_size(grid, out.size());
  for (int row = 0; row < grid.height; ++row) render_row(field, grid, row, out);
}

Moments intensity_moments(const FieldFn& field, const PixelGrid& grid) {
  std::vector<Moments> rows(static_cast<std::size_t>(grid.height));
  for (int row = 0; row < grid.height; ++row) rows[row] = row_moments(field, grid, row);
  return reduce_rows(rows);
}

void poisson_counts(std::span<const double> means, std::uint64_t seed, std::span<double> out) {
  if (means.size() != out.size()) throw std::invalid_argument("size mismatch");
  for (std::size_t k = 0; k < means.size(); ++k) out[k] = poisson_draw(means[k], seed, k);
}

}  // namespace kernels::serial

namespace kernels::parallel {

void render_intensity(const FieldFn& field, const PixelGrid& grid, std::span<double> out, int threads) {
  check_size(grid, out.size());
#pragma omp parallel for schedule(static) num_threads(thread_count(threads))
  for (int row = 0; row < grid.height; ++row) render_row(field, grid, row, out);
}

Moments intensity_moments(const FieldFn& field, const PixelGrid& grid, int threads) {
  std::vector<Moments> rows(static_cast<std::size_t>(grid.height));
#pragma omp parallel for schedule(static) num_threads(thread_count(threads))
  for (int row = 0; row < grid.height; ++row) rows[row] = row_moments(field, grid, row);
  return reduce_rows(rows);
}

void poisson_counts(std::span<const double> means, std::uint64_t seed, std::span<double> out, int threads) {
  if (means.size() != out.size()) throw std::invalid_argument("size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(means.size());
  bool bad = false;
#pragma omp parallel for schedule(static) num_threads(thread_count(threads)) reduction(|| : bad)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const double m = means[k];
    if (!(m >= 0.0)) {
      bad = true;
      continue;
    }
    out[k] = poisson_draw(m, seed, static_cast<std::size_t>(k));
  }
  if (bad) throw std::invalid_argument("Poisson mean must be non-negative");
}

}  // namespace kernels::parallel

}  // namespace vortexwm
