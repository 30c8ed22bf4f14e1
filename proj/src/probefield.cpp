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

#include "vortexwm/probefield.hpp"

#include <algorithm>
#include <cmath>

#include "vortexwm/errors.hpp"
#include "vortexwm/kernels.hpp"

namespace vortexwm {

namespace {

constexpr double kTailWarning = 1e-6;

// Coefficients of phi(x+G, y) and phi(x-G, y) after the impulsive coupling
// exp(-i G sigma_x P_x) and projection onto <f|.
struct SplitCoefficients {
  Complex left;   // multiplies phi(x + G, y)
  Complex right;  // multiplies phi(x - G, y)
};

SplitCoefficients split(const QubitState& state, const Eigen::Vector2cd& f) {
  const Complex p0 = state.amp0();
  const Complex p1 = state.amp1();
  return {0.5 * std::conj(f(0) - f(1)) * (p0 - p1), 0.5 * std::conj(f(0) + f(1)) * (p0 + p1)};
}

Complex vortex(const ProbeConfig& cfg, double norm, Complex dx, double y) {
  const Complex core(dx.real(), dx.imag() + y);
  return norm * std::pow(core, cfg.charge) * std::exp(-(dx * dx + y * y) / (4.0 * cfg.w0 * cfg.w0));
}

Complex vortex1(double norm, double inv4w2, double dx, double y) {
  return norm * Complex(dx, y) * std::exp(-(dx * dx + y * y) * inv4w2);
}

}  // namespace

const char* to_string(FieldMode mode) { return mode == FieldMode::Exact ? "exact" : "approx"; }

FieldMode field_mode_from_string(const std::string& s) {
  if (s == "exact") return FieldMode::Exact;
  if (s == "approx") return FieldMode::Approx;
  throw DomainError("unknown field mode '" + s + "' (expected exact|approx)");
}

double lg_normalization(const ProbeConfig& cfg) {
  cfg.validate();
  const double two_w2 = 2.0 * cfg.w0 * cfg.w0;
  return 1.0 / (kPi * std::tgamma(cfg.charge + 1.0) * std::pow(two_w2, cfg.charge + 1));
}

Complex lg_amplitude(const ProbeConfig& cfg, double x, double y) {
  return vortex(cfg, std::sqrt(lg_normalization(cfg)), Complex(x, 0.0), y);
}

double eta(const ProbeConfig& cfg) {
  const double a = cfg.coupling * cfg.coupling / (2.0 * cfg.w0 * cfg.w0);
  return (1.0 - a) * std::exp(-a);
}

double centroid_denominator(const ProbeConfig& cfg, Complex w) {
  const double m2 = std::norm(w);
  return 0.5 * (1.0 + m2 + eta(cfg) * (1.0 - m2));
}

Complex exact_postselected_field(const ProbeConfig& cfg, const QubitState& state, double x, double y) {
  return exact_field(cfg, state)(x, y);
}

Complex approx_postselected_field(const ProbeConfig& cfg, const QubitState& state, double x, double y) {
  return approx_field(cfg, state)(x, y);
}

ComplexField lg_field(const ProbeConfig& cfg) {
  cfg.validate();
  const double n = std::sqrt(lg_normalization(cfg));
  FieldInfo info{1.0, true, 4.0 * cfg.w0, "LG vortex"};
  return {[cfg, n](double x, double y) { return vortex(cfg, n, Complex(x, 0.0), y); }, info};
}

ComplexField exact_field(const ProbeConfig& cfg, const QubitState& state, const BlochVector& postselection) {
  cfg.validate_exact();
  validate_postselection(postselection);
  const auto c = split(state, postselection_ket(postselection));
  if (cfg.coupling == 0.0 && std::norm(c.left + c.right) <= 1e-12) {
    throw OrthogonalPostselectionError("post-selected field vanishes identically (G = 0, orthogonal state)");
  }
  const double g = cfg.coupling;
  const double n = std::sqrt(lg_normalization(cfg));
  const double inv4w2 = 1.0 / (4.0 * cfg.w0 * cfg.w0);
  FieldInfo info;
  info.squared_norm = std::norm(c.left) + std::norm(c.right) + 2.0 * eta(cfg) * (std::conj(c.left) * c.right).real();
  info.required_extent = 4.0 * cfg.w0 + 2.0 * g;
  info.description = "exact post-selected field";
  try {
    const double mw = std::abs(weak_value_mixed(state.bloch(), postselection).value);
    info.required_extent = 4.0 * cfg.w0 + 2.0 * g * std::max(1.0, mw);
  } catch (const DomainError&) {
    // State on the projection pole: |w| is unbounded, keep the |w| <= 1 window.
  }
  return {[c, g, n, inv4w2](double x, double y) {
            return c.left * vortex1(n, inv4w2, x + g, y) + c.right * vortex1(n, inv4w2, x - g, y);
          },
          info};
}

ComplexField approx_field(const ProbeConfig& cfg, const QubitState& state, const BlochVector& postselection) {
  cfg.validate();
  validate_postselection(postselection);
  const Eigen::Vector2cd f = postselection_ket(postselection);
  const Complex overlap = f.dot(state.ket());
  if (std::norm(overlap) <= 1e-12) throw PoleStateError("weak value diverges: state orthogonal to post-selection");
  const Complex w = weak_value_mixed(state.bloch(), postselection).value;
  const Complex shift = cfg.coupling * w;
  const double n = std::sqrt(lg_normalization(cfg));
  FieldInfo info;
  info.required_extent = 4.0 * cfg.w0 + 2.0 * cfg.coupling * std::max(1.0, std::abs(w));
  info.description = "weak-limit post-selected field";
  if (cfg.charge == 1) {
    const double a2 = shift.imag() * shift.imag() / (2.0 * cfg.w0 * cfg.w0);
    info.squared_norm = std::norm(overlap) * std::exp(a2) * (1.0 + a2);
  }
  return {[cfg, n, overlap, shift](double x, double y) { return overlap * vortex(cfg, n, x - shift, y); }, info};
}

ComplexField postselected_field(FieldMode mode, const ProbeConfig& cfg, const QubitState& state,
                                const BlochVector& postselection) {
  return mode == FieldMode::Exact ? exact_field(cfg, state, postselection)
                                  : approx_field(cfg, state, postselection);
}

double exact_field_norm(const ProbeConfig& cfg, const QubitState& state) {
  const Complex w = weak_value_pure(state).value;
  return std::norm(state.amp1()) * centroid_denominator(cfg, w);
}

Point2 analytic_centroid(const ProbeConfig& cfg, const QubitState& state) {
  cfg.validate_exact();
  const Complex w = weak_value_pure(state).value;
  const double g = cfg.coupling;
  const double d = centroid_denominator(cfg, w);
  const double damping = std::exp(-g * g / (2.0 * cfg.w0 * cfg.w0));
  return {g * w.real() / d, kCentroidYSign * g * damping * w.imag() / d};
}

QuadratureResult centroid_by_quadrature(const ComplexField& field, int resolution, double extent) {
  if (resolution < 64) throw DomainError("quadrature resolution must be >= 64");
  if (!(extent > 0.0)) throw DomainError("quadrature extent must be positive");
  const PixelGrid grid{resolution, resolution, extent / resolution, {0.0, 0.0}};
  const Moments m = kernels::parallel::intensity_moments(field.function(), grid);
  if (!(m.mass > 0.0)) throw DomainError("field has zero intensity over the quadrature window");

  QuadratureResult r;
  const double area = grid.pitch * grid.pitch;
  r.mass = m.mass * area;
  r.centroid = {m.mx / m.mass, m.my / m.mass};

  const auto& info = field.info();
  if (std::isfinite(info.squared_norm) && info.squared_norm > 0.0) {
    r.tail_mass = std::max(0.0, 1.0 - r.mass / info.squared_norm);
  } else {
    // Border-cell share of the window total stands in for the missing tail.
    double border = 0.0;
    for (int k = 0; k < resolution; ++k) {
      border += field.intensity(grid.x(k), grid.y(0)) + field.intensity(grid.x(k), grid.y(resolution - 1));
      border += field.intensity(grid.x(0), grid.y(k)) + field.intensity(grid.x(resolution - 1), grid.y(k));
    }
    r.tail_mass = border / m.mass;
  }
  r.truncated = extent < info.required_extent || r.tail_mass > kTailWarning;
  return r;
}

Point2 locate_field_zero(const ComplexField& field, Point2 guess, double h) {
  Point2 p = guess;
  for (int iter = 0; iter < 50; ++iter) {
    const Complex f = field(p.x, p.y);
    const Complex fx = (field(p.x + h, p.y) - field(p.x - h, p.y)) / (2.0 * h);
    const Complex fy = (field(p.x, p.y + h) - field(p.x, p.y - h)) / (2.0 * h);
    const double a = fx.real(), b = fy.real(), c = fx.imag(), d = fy.imag();
    const double det = a * d - b * c;
    if (det == 0.0) throw EstimationError("singular Jacobian while locating field zero");
    const Point2 step{(d * f.real() - b * f.imag()) / det, (-c * f.real() + a * f.imag()) / det};
    p = p - step;
    if (step.norm() <= 1e-14 * std::max(1.0, p.norm())) return p;
  }
  const Complex f = field(p.x, p.y);
  if (std::abs(f) <= 1e-13) return p;
  throw EstimationError("field zero search did not converge");
}

}  // namespace vortexwm
