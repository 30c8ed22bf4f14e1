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
#include <vector>

#include <Eigen/Dense>

namespace vortexwm {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Point in (or inside) the unit ball. |0> is the north pole (0, 0, 1) and
/// |1> the south pole (0, 0, -1).
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector cross(const BlochVector& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const;
  bool is_pure(double tol = 1e-9) const;

  friend BlochVector operator+(BlochVector a, const BlochVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend BlochVector operator-(BlochVector a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend BlochVector operator*(double s, BlochVector a) { return {s * a.x, s * a.y, s * a.z}; }
  BlochVector operator-() const { return {-x, -y, -z}; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline constexpr BlochVector kNorthPole{0.0, 0.0, 1.0};
inline constexpr BlochVector kSouthPole{0.0, 0.0, -1.0};
inline constexpr BlochVector kMaximallyMixed{0.0, 0.0, 0.0};

/// Pure polarization state cos(theta)|0> + e^{i phi} sin(theta)|1>.
///
/// theta lives in [0, pi/2] and phi in [0, 2 pi). At the poles phi carries
/// no information and is stored as 0 so that equal states compare equal.
class QubitState {
 public:
  QubitState() = default;

  /// Throws DomainError if theta is outside [0, pi/2] or not finite.
  static QubitState from_angles(double theta, double phi);
  /// Any nonzero amplitude pair; the global phase is discarded.
  static QubitState from_amplitudes(Complex a0, Complex a1);
  /// Requires a unit-norm vector (within 1e-9).
  static QubitState from_bloch(const BlochVector& r);

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  Complex amp0() const;
  Complex amp1() const;
  Eigen::Vector2cd ket() const { return {amp0(), amp1()}; }
  BlochVector bloch() const;

  friend bool operator==(const QubitState&, const QubitState&) = default;

 private:
  QubitState(double theta, double phi) : theta_(theta), phi_(phi) {}
  double theta_ = 0.0;
  double phi_ = 0.0;
};

QubitState state_from_angles(double theta, double phi);

inline const QubitState kStateZero = QubitState::from_angles(0.0, 0.0);
inline const QubitState kStateOne = QubitState::from_angles(kPi / 2.0, 0.0);
inline const QubitState kStateH = QubitState::from_angles(kPi / 4.0, 0.0);

enum class JonesBasis { Circular, Linear };

/// 2x2 polarization operator tagged with the basis its matrix is written in.
///
/// Circular basis: {|0> = |L>, |1> = |R>}. Linear basis: {|H>, |V>} with
/// |H> = (|0> + |1>)/sqrt2 and |V> = i(|0> - |1>)/sqrt2. The factor i on |V>
/// is a phase choice for that basis vector alone; as a state |V> is still
/// (|0> - |1>)/sqrt2.
class JonesOperator {
 public:
  JonesOperator(Eigen::Matrix2cd matrix, JonesBasis basis) : m_(std::move(matrix)), basis_(basis) {}

  const Eigen::Matrix2cd& matrix() const { return m_; }
  JonesBasis basis() const { return basis_; }

  JonesOperator to_circular() const;
  JonesOperator to_linear() const;
  JonesOperator in(JonesBasis b) const { return b == JonesBasis::Circular ? to_circular() : to_linear(); }

  bool is_unitary(double tol = 1e-12) const;

  /// Product in the circular basis (this applied after `rhs`).
  JonesOperator operator*(const JonesOperator& rhs) const;

  QubitState apply(const QubitState& s) const;

 private:
  Eigen::Matrix2cd m_;
  JonesBasis basis_;
};

/// Columns are |0> and |1> written in the {|H>, |V>} basis.
const Eigen::Matrix2cd& circular_to_linear();

enum class WavePlate { Half, Quarter };

/// Retarder with its fast axis at `angle` from horizontal, in the linear basis.
JonesOperator waveplate(WavePlate plate, double angle);

QubitState apply_waveplate(const QubitState& state, WavePlate plate, double angle);

/// Linear input |H> through a half-wave plate at `plate_angle`.
QubitState equator_state(double plate_angle);
/// |H> through a quarter-wave plate at `plate_angle`, then one fixed at 45 deg.
QubitState infinity_state(double plate_angle);

/// Half-wave plate swept over [0, pi/2), endpoint excluded. The output linear
/// polarization turns through pi, so the Bloch azimuth winds once.
std::vector<QubitState> equator_path(int steps);
/// Rotating quarter-wave plate swept over [0, pi), endpoint excluded.
std::vector<QubitState> infinity_path(int steps);

double fidelity(const QubitState& a, const QubitState& b);
/// Uhlmann fidelity between (possibly mixed) states given by Bloch vectors.
double fidelity(const BlochVector& a, const BlochVector& b);
double trace_distance(const BlochVector& a, const BlochVector& b);

/// 2x2 density operator (I + r.sigma)/2 in the circular basis.
Eigen::Matrix2cd density_matrix(const BlochVector& r);
BlochVector bloch_from_density(const Eigen::Matrix2cd& rho);

std::string state_csv_header();
std::string state_csv_row(const QubitState& s);

}  // namespace vortexwm
