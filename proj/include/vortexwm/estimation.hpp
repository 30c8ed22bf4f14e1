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

#include <span>
#include <utility>
#include <vector>

#include "vortexwm/imaging.hpp"
#include "vortexwm/weakvalue.hpp"

namespace vortexwm {

/// Dark-core location in physical coordinates.
struct ZipEstimate {
  Point2 position;
  int pixel_count_used = 0;
  double threshold_used = 0.0;
};

inline constexpr double kDefaultZipThreshold = 0.01;

/// Weighted centroid of the dark core.
///
/// Pixels at or below threshold_fraction * max are grouped into
/// 4-connected components; components touching the border (the dark
/// surroundings of the beam) or centred outside the beam's rms radius are
/// dropped and the largest remaining one is averaged with weights
/// (threshold - I). Throws NoVortexFound when nothing
/// is left and AmbiguousVortex when the largest size is shared.
ZipEstimate extract_zip(const IntensityImage& img, double threshold_fraction = kDefaultZipThreshold);

/// Image position of weak value w: origin + scale * R(orientation) (Re w, Im w).
struct Calibration {
  Point2 origin;
  double scale = 1.0;
  double orientation = 0.0;

  static Calibration identity(double coupling) { return {{0.0, 0.0}, coupling, 0.0}; }

  void validate() const;
  Complex to_weak_value(Point2 position) const;
  Point2 to_position(Complex w) const;
};

struct CalibrationFit {
  Calibration calibration;
  /// RMS distance between the fitted and the extracted positions.
  double residual = 0.0;
};

/// Least-squares similarity fit of positions = origin + c w, c = scale e^{i orientation}.
/// Throws DomainError with fewer than two points or no spread in w.
CalibrationFit fit_calibration(std::span<const Point2> positions, std::span<const Complex> weak_values);

/// References are images of known states post-selected on |1>.
CalibrationFit calibrate(const std::vector<std::pair<IntensityImage, QubitState>>& references,
                         double threshold_fraction = kDefaultZipThreshold);

inline constexpr double kNearPoleCap = 50.0;

Complex estimate_weak_value(const ZipEstimate& zip, const Calibration& cal);

/// Inverts the calibrated weak value through the stereographic map. Throws
/// IllConditionedEstimate when |w| exceeds `cap`.
QubitState estimate_state(const ZipEstimate& zip, const Calibration& cal,
                          const BlochVector& postselection = kSouthPole, double cap = kNearPoleCap);

struct Observation {
  ZipEstimate zip;
  Calibration calibration;
  BlochVector postselection = kSouthPole;
};

struct ReconstructionResult {
  BlochVector bloch;
  /// RMS distance of the reconstruction lines from the solution.
  double residual = 0.0;
  int images_used = 0;
  bool clipped = false;
};

inline constexpr double kMaxLineConditionNumber = 1e6;

/// Least-squares point closest to the lines through each pole -f and the
/// plane point of its weak value. Throws DegenerateGeometry naming the most
/// nearly parallel pair when the normal matrix is ill-conditioned.
ReconstructionResult reconstruct_mixed(const std::vector<Observation>& observations);
ReconstructionResult reconstruct_from_weak_values(std::span<const WeakValue> weak_values);

}  // namespace vortexwm
