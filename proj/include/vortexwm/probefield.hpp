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

#include <functional>
#include <limits>
#include <string>

#include "vortexwm/geometry.hpp"
#include "vortexwm/polarization.hpp"
#include "vortexwm/probe_config.hpp"
#include "vortexwm/weakvalue.hpp"

namespace vortexwm {

/// Sign of the imaginary-part term in the exact-field y centroid.
///
/// Fixed by quadrature of the exact post-selected field: the interference
/// term pulls the centroid towards -Im(w), the opposite side of the axis from
/// the weak-limit vortex core at +G Im(w). probefield_test re-derives it.
inline constexpr double kCentroidYSign = -1.0;

struct FieldInfo {
  /// Integral of |field|^2 over the plane, NaN when no closed form is known.
  double squared_norm = std::numeric_limits<double>::quiet_NaN();
  bool normalized = false;
  /// Smallest square window (side length) that should contain the beam.
  double required_extent = 0.0;
  std::string description;
};

/// Complex amplitude evaluated lazily at physical (x, y) in millimetres.
class ComplexField {
 public:
  using Fn = std::function<Complex(double, double)>;

  ComplexField(Fn fn, FieldInfo info) : fn_(std::move(fn)), info_(std::move(info)) {}

  Complex operator()(double x, double y) const { return fn_(x, y); }
  double intensity(double x, double y) const { return std::norm(fn_(x, y)); }
  const Fn& function() const { return fn_; }
  const FieldInfo& info() const { return info_; }

 private:
  Fn fn_;
  FieldInfo info_;
};

enum class FieldMode { Exact, Approx };

const char* to_string(FieldMode mode);
FieldMode field_mode_from_string(const std::string& s);

/// N^2 = 1 / (pi l! (2 w0^2)^(l+1)); equals 1/(4 pi w0^4) for l = 1.
double lg_normalization(const ProbeConfig& cfg);

/// Normalized N (x + iy)^l exp(-(x^2 + y^2) / 4 w0^2).
Complex lg_amplitude(const ProbeConfig& cfg, double x, double y);

/// Overlap <phi(x+G, y) | phi(x-G, y)> = (1 - G^2/2w0^2) exp(-G^2/2w0^2).
double eta(const ProbeConfig& cfg);

/// (1/2){1 + |w|^2 + eta (1 - |w|^2)}.
double centroid_denominator(const ProbeConfig& cfg, Complex w);

/// <1|psi>/2 [(1 - w) phi(x+G, y) + (1 + w) phi(x-G, y)], not renormalized.
///
/// Evaluated from the amplitudes, so |0> is allowed when G > 0. With G = 0
/// and a post-selection orthogonal to the state the field vanishes
/// identically and OrthogonalPostselectionError is thrown.
Complex exact_postselected_field(const ProbeConfig& cfg, const QubitState& state, double x, double y);

/// <1|psi> phi(x - G w, y) with the displacement continued to complex w.
Complex approx_postselected_field(const ProbeConfig& cfg, const QubitState& state, double x, double y);

ComplexField lg_field(const ProbeConfig& cfg);
ComplexField exact_field(const ProbeConfig& cfg, const QubitState& state,
                         const BlochVector& postselection = kSouthPole);
ComplexField approx_field(const ProbeConfig& cfg, const QubitState& state,
                          const BlochVector& postselection = kSouthPole);
ComplexField postselected_field(FieldMode mode, const ProbeConfig& cfg, const QubitState& state,
                                const BlochVector& postselection = kSouthPole);

/// |<1|psi>|^2 times the centroid denominator.
double exact_field_norm(const ProbeConfig& cfg, const QubitState& state);

/// Closed-form intensity centroid of the exact field (charge 1).
Point2 analytic_centroid(const ProbeConfig& cfg, const QubitState& state);

struct QuadratureResult {
  Point2 centroid;
  double mass = 0.0;
  /// Fraction of the plane integral outside the window (estimated).
  double tail_mass = 0.0;
  bool truncated = false;
};

/// Midpoint-rule intensity moments on a resolution^2 grid over the square
/// [-extent/2, extent/2]^2. Throws DomainError for resolution < 64.
QuadratureResult centroid_by_quadrature(const ComplexField& field, int resolution, double extent);

/// Newton iteration on (Re, Im) of the field, with a finite-difference
/// Jacobian of step `h`. Throws EstimationError if it does not converge.
Point2 locate_field_zero(const ComplexField& field, Point2 guess, double h);

}  // namespace vortexwm
