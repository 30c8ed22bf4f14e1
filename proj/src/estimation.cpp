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

#include "vortexwm/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vortexwm/errors.hpp"

namespace vortexwm {

namespace {

struct Component {
  std::vector<std::size_t> pixels;
  bool touches_border = false;
};

std::vector<Component> dark_components(const IntensityImage& img, double threshold) {
  const auto g = img.grid();
  std::vector<char> seen(g.size(), 0);
  std::vector<Component> out;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (seen[start] || img.pixels[start] > threshold) continue;
    Component c;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      c.pixels.push_back(k);
      const int row = static_cast<int>(k / g.width);
      const int col = static_cast<int>(k % g.width);
      if (row == 0 || col == 0 || row == g.height - 1 || col == g.width - 1) c.touches_border = true;
      const int nbr[4][2] = {{row - 1, col}, {row + 1, col}, {row, col - 1}, {row, col + 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[1] < 0 || n[0] >= g.height || n[1] >= g.width) continue;
        const std::size_t j = g.index(n[0], n[1]);
        if (!seen[j] && img.pixels[j] <= threshold) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    std::sort(c.pixels.begin(), c.pixels.end());
    out.push_back(std::move(c));
  }
  return out;
}

Point2 weighted_position(const IntensityImage& img, const Component& c, double threshold) {
  const auto g = img.grid();
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t k : c.pixels) {
    const double w = std::max(0.0, threshold - img.pixels[k]);
    sw += w;
    sx += w * g.x(static_cast<int>(k % g.width));
    sy += w * g.y(static_cast<int>(k / g.width));
  }
  if (sw == 0.0) {
    for (std::size_t k : c.pixels) {
      sx += g.x(static_cast<int>(k % g.width));
      sy += g.y(static_cast<int>(k / g.width));
    }
    sw = static_cast<double>(c.pixels.size());
  }
  return {sx / sw, sy / sw};
}

Point2 component_center(const IntensityImage& img, const Component& c) {
  const auto g = img.grid();
  double sx = 0.0, sy = 0.0;
  for (std::size_t k : c.pixels) {
    sx += g.x(static_cast<int>(k % g.width));
    sy += g.y(static_cast<int>(k / g.width));
  }
  const double n = static_cast<double>(c.pixels.size());
  return {sx / n, sy / n};
}

// Intensity centroid and rms radius about it.
std::pair<Point2, double> beam_footprint(const IntensityImage& img) {
  const auto g = img.grid();
  double m = 0.0, mx = 0.0, my = 0.0, mrr = 0.0;
  for (int row = 0; row < g.height; ++row) {
    for (int col = 0; col < g.width; ++col) {
      const double v = img.at(row, col);
      m += v;
      mx += v * g.x(col);
      my += v * g.y(row);
      mrr += v * (g.x(col) * g.x(col) + g.y(row) * g.y(row));
    }
  }
  const Point2 c{mx / m, my / m};
  return {c, std::sqrt(std::max(0.0, mrr / m - c.x * c.x - c.y * c.y))};
}

struct Line {
  Eigen::Vector3d point;
  Eigen::Vector3d dir;
};

Eigen::Vector3d vec(const BlochVector& r) { return {r.x, r.y, r.z}; }

Line reconstruction_line(Complex w, const BlochVector& postselection) {
  const auto frame = ProjectionFrame::for_postselection(postselection);
  const Eigen::Vector3d p = vec(frame.pole);
  const Eigen::Vector3d q = vec(frame.plane_point(w));
  return {p, (q - p).normalized()};
}

ReconstructionResult intersect(const std::vector<Line>& lines) {
  if (lines.size() < 2) throw DomainError("reconstruction needs at least two observations");
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  for (const auto& l : lines) {
    const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - l.dir * l.dir.transpose();
    a += proj;
    b += proj * l.point;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(a);
  const Eigen::Vector3d ev = eig.eigenvalues();
  if (!(ev(0) > 0.0) || ev(2) / ev(0) > kMaxLineConditionNumber) {
    int bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const double c = std::abs(lines[i].dir.dot(lines[j].dir));
        if (c > best) {
          best = c;
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
        }
      }
    }
    std::ostringstream msg;
    msg << "degenerate geometry: reconstruction lines are (nearly) parallel; most parallel pair is observations "
        << bi << " and " << bj << "; add a post-selection plane";
    throw DegenerateGeometry(msg.str(), bi, bj);
  }
  const Eigen::Vector3d coeffs = (eig.eigenvectors().transpose() * b).array() / ev.array();
  const Eigen::Vector3d x = eig.eigenvectors() * coeffs;

  double ss = 0.0;
  for (const auto& l : lines) {
    const Eigen::Vector3d d = x - l.point;
    ss += (d - d.dot(l.dir) * l.dir).squaredNorm();
  }
  ReconstructionResult r;
  r.bloch = {x(0), x(1), x(2)};
  r.residual = std::sqrt(ss / static_cast<double>(lines.size()));
  r.images_used = static_cast<int>(lines.size());
  const double n = r.bloch.norm();
  if (n > 1.0) {
    r.bloch = (1.0 / n) * r.bloch;
    r.clipped = true;
  }
  return r;
}

}  // namespace

ZipEstimate extract_zip(const IntensityImage& img, double threshold_fraction) {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 0.5)) {
    throw DomainError("threshold fraction must lie in (0, 0.5)");
  }
  const double peak = img.max();
  if (!(peak > 0.0)) throw DomainError("image has no positive pixel");
  const double threshold = threshold_fraction * peak;

  auto comps = dark_components(img, threshold);
  std::erase_if(comps, [](const Component& c) { return c.touches_border; });
  // Shot noise leaves enclosed dark patches in the sparse outskirts of the
  // beam; the core lies within the rms radius of the intensity centroid.
  const auto [center, radius] = beam_footprint(img);
  std::erase_if(comps, [&](const Component& c) { return distance(component_center(img, c), center) > radius; });
  if (comps.empty()) throw NoVortexFound("no vortex found: no interior region below threshold");
  std::stable_sort(comps.begin(), comps.end(),
                   [](const Component& a, const Component& b) { return a.pixels.size() > b.pixels.size(); });
  if (comps.size() > 1 && comps[0].pixels.size() == comps[1].pixels.size()) {
    std::ostringstream msg;
    msg << "ambiguous vortex: " << comps[0].pixels.size() << "-pixel candidates at";
    std::vector<std::pair<double, double>> candidates;
    for (const auto& c : comps) {
      if (c.pixels.size() != comps[0].pixels.size()) break;
      const Point2 p = weighted_position(img, c, threshold);
      msg << " (" << p.x << ", " << p.y << ")";
      candidates.emplace_back(p.x, p.y);
    }
    throw AmbiguousVortex(msg.str(), std::move(candidates));
  }
  return {weighted_position(img, comps[0], threshold), static_cast<int>(comps[0].pixels.size()), threshold};
}

void Calibration::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("calibration scale must be positive");
}

Complex Calibration::to_weak_value(Point2 p) const {
  const Complex d(p.x - origin.x, p.y - origin.y);
  return d * std::polar(1.0 / scale, -orientation);
}

Point2 Calibration::to_position(Complex w) const {
  const Complex d = w * std::polar(scale, orientation);
  return {origin.x + d.real(), origin.y + d.imag()};
}

CalibrationFit fit_calibration(std::span<const Point2> positions, std::span<const Complex> weak_values) {
  if (positions.size() != weak_values.size()) throw DomainError("positions and weak values differ in length");
  if (positions.size() < 2) throw DomainError("calibration needs at least two references");
  const double n = static_cast<double>(positions.size());
  Complex wbar = 0.0, zbar = 0.0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    wbar += weak_values[k];
    zbar += Complex(positions[k].x, positions[k].y);
  }
  wbar /= n;
  zbar /= n;
  double sww = 0.0;
  Complex swz = 0.0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const Complex dw = weak_values[k] - wbar;
    sww += std::norm(dw);
    swz += std::conj(dw) * (Complex(positions[k].x, positions[k].y) - zbar);
  }
  if (sww <= 1e-24) throw DomainError("degenerate calibration: all reference weak values coincide");
  const Complex c = swz / sww;
  const Complex o = zbar - c * wbar;

  CalibrationFit fit;
  fit.calibration = {{o.real(), o.imag()}, std::abs(c), std::arg(c)};
  fit.calibration.validate();
  double ss = 0.0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    ss += std::norm(o + c * weak_values[k] - Complex(positions[k].x, positions[k].y));
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

CalibrationFit calibrate(const std::vector<std::pair<IntensityImage, QubitState>>& references,
                         double threshold_fraction) {
  std::vector<Point2> positions;
  std::vector<Complex> ws;
  for (const auto& [img, state] : references) {
    positions.push_back(extract_zip(img, threshold_fraction).position);
    ws.push_back(weak_value_pure(state).value);
  }
  return fit_calibration(positions, ws);
}

Complex estimate_weak_value(const ZipEstimate& zip, const Calibration& cal) {
  cal.validate();
  return cal.to_weak_value(zip.position);
}

QubitState estimate_state(const ZipEstimate& zip, const Calibration& cal, const BlochVector& postselection,
                          double cap) {
  const Complex w = estimate_weak_value(zip, cal);
  if (std::abs(w) > cap) {
    throw IllConditionedEstimate("near-pole, ill-conditioned: |w| = " + std::to_string(std::abs(w)) +
                                 " exceeds cap " + std::to_string(cap) + "; switch post-selection plane");
  }
  if (postselection == kSouthPole) return stereographic_invert(w);
  return QubitState::from_bloch(stereographic_invert(w, postselection));
}

ReconstructionResult reconstruct_mixed(const std::vector<Observation>& observations) {
  std::vector<Line> lines;
  lines.reserve(observations.size());
  for (const auto& o : observations) {
    lines.push_back(reconstruction_line(estimate_weak_value(o.zip, o.calibration), o.postselection));
  }
  return intersect(lines);
}

ReconstructionResult reconstruct_from_weak_values(std::span<const WeakValue> weak_values) {
  std::vector<Line> lines;
  lines.reserve(weak_values.size());
  for (const auto& w : weak_values) lines.push_back(reconstruction_line(w.value, w.postselection));
  return intersect(lines);
}

}  // namespace vortexwm
