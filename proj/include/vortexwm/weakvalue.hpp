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

#include <complex>
#include <string>

#include "vortexwm/polarization.hpp"
#include "vortexwm/probe_config.hpp"

namespace vortexwm {

inline constexpr BlochVector kObservableAxis{1.0, 0.0, 0.0};

/// Weak value of sigma_x together with the post-selection that produced it.
struct WeakValue {
  Complex value;
  BlochVector postselection = kSouthPole;
  BlochVector observable_axis = kObservableAxis;
};

/// Plane geometry attached to a post-selection f (perpendicular to x):
/// projection pole p = -f, and the plane through the origin orthogonal to p
/// spanned by x and e = p cross x. A weak value w sits at
/// Re(w) x - Im(w) e on that plane.
struct ProjectionFrame {
  BlochVector pole;
  BlochVector real_axis;
  BlochVector imag_axis;

  /// Throws DomainError if f is not a unit vector orthogonal to x (1e-9).
  static ProjectionFrame for_postselection(const BlochVector& postselection);

  BlochVector plane_point(Complex w) const;
  Complex weak_value_at(const BlochVector& plane_point) const;
};

void validate_postselection(const BlochVector& postselection);

/// Post-selection |1>: <0|psi> / <1|psi> = e^{-i phi} cot(theta).
/// Throws PoleStateError for |0>.
WeakValue weak_value_pure(const QubitState& state);

/// Tr(Pi_f sigma_x rho) / Tr(Pi_f rho) for rho = (I + r.sigma)/2.
/// Throws OrthogonalPostselectionError when Tr(Pi_f rho) <= 1e-12.
WeakValue weak_value_mixed(const BlochVector& rho, const BlochVector& postselection);

/// Ket of the pure post-selection state with Bloch vector f.
Eigen::Vector2cd postselection_ket(const BlochVector& postselection);

/// Stereographic image from the pole -f. Returns exactly the weak value.
/// Throws PointAtInfinityError at the pole.
Complex stereographic_project(const QubitState& state, const BlochVector& postselection = kSouthPole);
Complex stereographic_project(const BlochVector& r, const BlochVector& postselection);

/// Unit-sphere point on the line from the pole through the plane point of w.
BlochVector stereographic_invert(Complex w, const BlochVector& postselection);
/// South-pole post-selection: theta = arccot|w|, phi = -arg w.
QubitState stereographic_invert(Complex w);

/// (w0 / G) / max(1, |w|). Throws DomainError for G <= 0.
double weak_condition_margin(const WeakValue& w, const ProbeConfig& probe);
double weak_condition_margin(Complex w, const ProbeConfig& probe);

inline constexpr double kDefaultMarginWarning = 10.0;

std::string weak_value_csv_header();
std::string weak_value_csv_row(const WeakValue& w);

}  // namespace vortexwm
