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

#include "vortexwm/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vortexwm/errors.hpp"

namespace vortexwm {

namespace {

constexpr double kBlochNormSlack = 1e-9;

double wrap_phase(double phi) {
  double p = std::fmod(phi, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (p >= kTwoPi) p = 0.0;
  return p;
}

void require_valid_bloch(const BlochVector& r) {
  if (!(r.norm() <= 1.0 + kBlochNormSlack)) {
    throw DomainError("Bloch vector norm exceeds 1");
  }
}

Eigen::Matrix2d rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

bool BlochVector::is_pure(double tol) const { return std::abs(norm() - 1.0) <= tol; }

QubitState QubitState::from_angles(double theta, double phi) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi / 2.0) {
    throw DomainError("theta must lie in [0, pi/2], got " + std::to_string(theta));
  }
  if (!std::isfinite(phi)) throw DomainError("phi must be finite");
  if (theta == 0.0 || theta == kPi / 2.0) return {theta, 0.0};
  return {theta, wrap_phase(phi)};
}

QubitState QubitState::from_amplitudes(Complex a0, Complex a1) {
  const double m0 = std::abs(a0);
  const double m1 = std::abs(a1);
  if (m0 == 0.0 && m1 == 0.0) throw DomainError("zero amplitude pair");
  const double theta = std::atan2(m1, m0);
  if (m0 == 0.0 || m1 == 0.0) return from_angles(m0 == 0.0 ? kPi / 2.0 : 0.0, 0.0);
  return from_angles(theta, std::arg(a1) - std::arg(a0));
}

QubitState QubitState::from_bloch(const BlochVector& r) {
  if (!r.is_pure()) throw DomainError("Bloch vector is not on the unit sphere");
  const double z = std::clamp(r.z / r.norm(), -1.0, 1.0);
  const double theta = 0.5 * std::acos(z);
  if (z == 1.0) return from_angles(0.0, 0.0);
  if (z == -1.0) return from_angles(kPi / 2.0, 0.0);
  return from_angles(theta, std::atan2(r.y, r.x));
}

Complex QubitState::amp0() const { return {std::cos(theta_), 0.0}; }

Complex QubitState::amp1() const { return std::polar(std::sin(theta_), phi_); }

BlochVector QubitState::bloch() const {
  const double s2 = std::sin(2.0 * theta_);
  return {s2 * std::cos(phi_), s2 * std::sin(phi_), std::cos(2.0 * theta_)};
}

QubitState state_from_angles(double theta, double phi) { return QubitState::from_angles(theta, phi); }

const Eigen::Matrix2cd& circular_to_linear() {
  static const Eigen::Matrix2cd u = [] {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd m;
    m << Complex(h, 0), Complex(h, 0), Complex(0, -h), Complex(0, h);
    return m;
  }();
  return u;
}

JonesOperator JonesOperator::to_circular() const {
  if (basis_ == JonesBasis::Circular) return *this;
  const auto& u = circular_to_linear();
  return {u.adjoint() * m_ * u, JonesBasis::Circular};
}

JonesOperator JonesOperator::to_linear() const {
  if (basis_ == JonesBasis::Linear) return *this;
  const auto& u = circular_to_linear();
  return {u * m_ * u.adjoint(), JonesBasis::Linear};
}

bool JonesOperator::is_unitary(double tol) const {
  return ((m_.adjoint() * m_) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol;
}

JonesOperator JonesOperator::operator*(const JonesOperator& rhs) const {
  return {to_circular().matrix() * rhs.to_circular().matrix(), JonesBasis::Circular};
}

QubitState JonesOperator::apply(const QubitState& s) const {
  const Eigen::Vector2cd out = to_circular().matrix() * s.ket();
  return QubitState::from_amplitudes(out(0), out(1));
}

JonesOperator waveplate(WavePlate plate, double angle) {
  // Fast axis along the rotated x-axis; the slow axis picks up the retardance.
  const double retardance = plate == WavePlate::Half ? kPi : -kPi / 2.0;
  Eigen::Matrix2cd phase = Eigen::Matrix2cd::Zero();
  phase(0, 0) = 1.0;
  phase(1, 1) = std::polar(1.0, retardance);
  const Eigen::Matrix2cd r = rotation(angle).cast<Complex>();
  return {r.transpose() * phase * r, JonesBasis::Linear};
}

QubitState apply_waveplate(const QubitState& state, WavePlate plate, double angle) {
  return waveplate(plate, angle).apply(state);
}

QubitState equator_state(double plate_angle) {
  return apply_waveplate(kStateH, WavePlate::Half, plate_angle);
}

QubitState infinity_state(double plate_angle) {
  const auto rotated = apply_waveplate(kStateH, WavePlate::Quarter, plate_angle);
  return apply_waveplate(rotated, WavePlate::Quarter, kPi / 4.0);
}

std::vector<QubitState> equator_path(int steps) {
  if (steps < 2) throw DomainError("equator_path needs at least 2 steps");
  std::vector<QubitState> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) out.push_back(equator_state(0.5 * kPi * k / steps));
  return out;
}

std::vector<QubitState> infinity_path(int steps) {
  if (steps < 2) throw DomainError("infinity_path needs at least 2 steps");
  std::vector<QubitState> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) out.push_back(infinity_state(kPi * k / steps));
  return out;
}

double fidelity(const QubitState& a, const QubitState& b) {
  return std::min(1.0, std::norm(a.ket().dot(b.ket())));
}

double fidelity(const BlochVector& a, const BlochVector& b) {
  require_valid_bloch(a);
  require_valid_bloch(b);
  const double ma = std::max(0.0, 1.0 - a.dot(a));
  const double mb = std::max(0.0, 1.0 - b.dot(b));
  return std::clamp(0.5 * (1.0 + a.dot(b) + std::sqrt(ma * mb)), 0.0, 1.0);
}

double trace_distance(const BlochVector& a, const BlochVector& b) { return 0.5 * (a - b).norm(); }

Eigen::Matrix2cd density_matrix(const BlochVector& r) {
  Eigen::Matrix2cd rho;
  rho << Complex(0.5 * (1.0 + r.z), 0.0), Complex(0.5 * r.x, -0.5 * r.y),
      Complex(0.5 * r.x, 0.5 * r.y), Complex(0.5 * (1.0 - r.z), 0.0);
  return rho;
}

BlochVector bloch_from_density(const Eigen::Matrix2cd& rho) {
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

std::string state_csv_header() { return "theta,phi,x,y,z"; }

std::string state_csv_row(const QubitState& s) {
  const auto r = s.bloch();
  std::ostringstream os;
  os.precision(17);
  os << s.theta() << ',' << s.phi() << ',' << r.x << ',' << r.y << ',' << r.z;
  return os.str();
}

}  // namespace vortexwm
