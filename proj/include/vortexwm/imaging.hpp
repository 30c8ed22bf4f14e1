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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vortexwm/kernels.hpp"
#include "vortexwm/probefield.hpp"

namespace vortexwm {

/// Camera geometry. Lengths in millimetres.
struct SensorConfig {
  double pixel_pitch = 0.00645;
  int width = 1024;
  int height = 1024;
  Point2 center_offset;
  /// Expected total photon count; empty means noiseless.
  std::optional<double> photon_budget;

  /// 6.45 um pixels, 1024 x 1024.
  static SensorConfig paper_ccd();
  /// n x n pixels spanning 8 w0.
  static SensorConfig fast(double w0, int n = 256);

  void validate() const;
  PixelGrid grid() const { return {width, height, pixel_pitch, center_offset}; }
  double field_of_view() const { return std::min(width, height) * pixel_pitch; }
};

/// What produced an image; enough to re-render it.
struct Provenance {
  std::optional<ProbeConfig> probe;
  std::optional<QubitState> state;
  /// Set for mixed-state scenes (state is then empty).
  std::optional<BlochVector> bloch;
  BlochVector postselection = kSouthPole;
  std::string mode;
  std::optional<std::uint64_t> noise_seed;
  std::optional<double> photon_budget;
  std::string command;
};

struct IntensityImage {
  SensorConfig sensor;
  std::vector<double> pixels;
  Provenance provenance;
  std::vector<std::string> warnings;

  PixelGrid grid() const { return sensor.grid(); }
  double at(int row, int col) const { return pixels[grid().index(row, col)]; }
  Point2 position(int row, int col) const { return {grid().x(col), grid().y(row)}; }
  double max() const;
  double total() const;
  /// Throws DomainError on size mismatch or negative / non-finite pixels.
  void validate() const;
};

/// Point-samples |field|^2 at pixel centres. Adds a truncation warning when
/// the field of view is smaller than the field's required extent.
IntensityImage render(const ComplexField& field, const SensorConfig& sensor, Provenance provenance = {});

IntensityImage render_state(const ProbeConfig& probe, const QubitState& state, const SensorConfig& sensor,
                            FieldMode mode, const BlochVector& postselection = kSouthPole);

/// Mixed state as the probability-weighted sum of the intensities of its
/// eigenstates (the post-selected intensity is linear in rho).
IntensityImage render_mixture(const ProbeConfig& probe, const BlochVector& rho, const SensorConfig& sensor,
                              FieldMode mode, const BlochVector& postselection = kSouthPole);

/// Poisson counts with expected total `photon_budget`. Geometry and scene
/// provenance are copied unchanged; the seed and budget are recorded.
IntensityImage add_shot_noise(const IntensityImage& img, double photon_budget, std::uint64_t seed);

enum class ImageFormat { Pgm16, Csv };

/// .pgm -> Pgm16, .csv -> Csv; anything else throws DomainError.
ImageFormat image_format_for(const std::filesystem::path& path);

/// Pgm16: binary 16-bit graymap with the metadata as a JSON comment line.
/// Csv: one text row per image row plus a `<path>.json` sidecar.
void write_image(const std::filesystem::path& path, const IntensityImage& img, ImageFormat format);
void write_image(const std::filesystem::path& path, const IntensityImage& img);
IntensityImage read_image(const std::filesystem::path& path, ImageFormat format);
IntensityImage read_image(const std::filesystem::path& path);

}  // namespace vortexwm
