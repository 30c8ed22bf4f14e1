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

#include "vortexwm/weakvalue.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vortexwm/errors.hpp"

namespace vortexwm {

namespace {

constexpr double kGeometryTol = 1e-9;
constexpr double kMinPostselectionProbability = 1e-12;

}  // namespace

void ProbeConfig::validate() const {
  if (!(w0 > 0.0) || !std::isfinite(w0)) throw DomainError("probe w0 must be positive");
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw DomainError("probe coupling must be >= 0");
  if (charge < 1) throw DomainError("vortex charge must be >= 1");
}

void ProbeConfig::validate_exact() const {
  validate();
  if (charge != 1) throw DomainError("exact post-selected field is only defined for charge 1");
}

void validate_postselection(const BlochVector& f) {
  if (std::abs(f.norm() - 1.0) > kGeometryTol) throw DomainError("post-selection must be a unit Bloch vector");
  if (std::abs(f.dot(kObservableAxis)) > kGeometryTol) {
    throw DomainError("post-selection must be orthogonal to the sigma_x axis");
  }
}

ProjectionFrame ProjectionFrame::for_postselection(const BlochVector& f) {
  validate_postselection(f);
  const BlochVector p = -f;
  return {p, kObservableAxis, p.cross(kObservableAxis)};
}

BlochVector ProjectionFrame::plane_point(Complex w) const {
  return w.real() * real_axis - w.imag() * imag_axis;
}

Complex ProjectionFrame::weak_value_at(const BlochVector& q) const {
  return {q.dot(real_axis), -q.dot(imag_axis)};
}

WeakValue weak_value_pure(const QubitState& state) {
  if (state.theta() == 0.0) throw PoleStateError("weak value diverges for |0> (pole state)");
  return {state.amp0() / state.amp1(), kSouthPole, kObservableAxis};
}

WeakValue weak_value_mixed(const BlochVector& r, const BlochVector& postselection) {
  const auto frame = ProjectionFrame::for_postselection(postselection);
  if (r.norm() > 1.0 + kGeometryTol) throw DomainError("Bloch vector norm exceeds 1");
  const double twice_prob = 1.0 - r.dot(frame.pole);
  if (0.5 * twice_prob <= kMinPostselectionProbability) {
    throw OrthogonalPostselectionError("post-selection probability is zero");
  }
  const Complex w{r.dot(frame.real_axis) / twice_prob, -r.dot(frame.imag_axis) / twice_prob};
  return {w, postselection, kObservableAxis};
}

Eigen::Vector2cd postselection_ket(const BlochVector& f) {
  const auto s = QubitState::from_bloch(f);
  return s.ket();
}

Complex stereographic_project(const QubitState& state, const BlochVector& postselection) {
  if (postselection == kSouthPole) {
    if (state.theta() == 0.0) throw PointAtInfinityError("|0> projects to the point at infinity");
    return weak_value_pure(state).value;
  }
  return stereographic_project(state.bloch(), postselection);
}

Complex stereographic_project(const BlochVector& r, const BlochVector& postselection) {
  const auto frame = ProjectionFrame::for_postselection(postselection);
  if ((r - frame.pole).norm() <= kGeometryTol) {
    throw PointAtInfinityError("state coincides with the projection pole");
  }
  return weak_value_mixed(r, postselection).value;
}

BlochVector stereographic_invert(Complex w, const BlochVector& postselection) {
  const auto frame = ProjectionFrame::for_postselection(postselection);
  const BlochVector q = frame.plane_point(w);
  const double t = 2.0 / (1.0 + q.dot(q));
  return frame.pole + t * (q - frame.pole);
}

QubitState stereographic_invert(Complex w) {
  const double m = std::abs(w);
  if (m == 0.0) return kStateOne;
  return QubitState::from_angles(std::atan2(1.0, m), -std::arg(w));
}

double weak_condition_margin(Complex w, const ProbeConfig& probe) {
  if (!(probe.coupling > 0.0)) throw DomainError("weak-condition margin needs coupling > 0");
  return (probe.w0 / probe.coupling) / std::max(1.0, std::abs(w));
}

double weak_condition_margin(const WeakValue& w, const ProbeConfig& probe) {
  return weak_condition_margin(w.value, probe);
}

std::string weak_value_csv_header() { return "re,im,postselect_x,postselect_y,postselect_z"; }

std::string weak_value_csv_row(const WeakValue& w) {
  std::ostringstream os;
  os.precision(17);
  os << w.value.real() << ',' << w.value.imag() << ',' << w.postselection.x << ',' << w.postselection.y
     << ',' << w.postselection.z;
  return os.str();
}

}  // namespace vortexwm
