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

#include "vortexwm/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vortexwm/errors.hpp"

namespace vortexwm {

SensorConfig SensorConfig::paper_ccd() { return {0.00645, 1024, 1024, {}, std::nullopt}; }

SensorConfig SensorConfig::fast(double w0, int n) { return {8.0 * w0 / n, n, n, {}, std::nullopt}; }

void SensorConfig::validate() const {
  if (!(pixel_pitch > 0.0) || !std::isfinite(pixel_pitch)) throw DomainError("pixel pitch must be positive");
  if (width < 16 || height < 16) throw DomainError("sensor must be at least 16 x 16 pixels");
  if (photon_budget && !(*photon_budget > 0.0)) throw DomainError("photon budget must be positive");
}

double IntensityImage::max() const {
  return pixels.empty() ? 0.0 : *std::max_element(pixels.begin(), pixels.end());
}

double IntensityImage::total() const { return std::accumulate(pixels.begin(), pixels.end(), 0.0); }

void IntensityImage::validate() const {
  sensor.validate();
  if (pixels.size() != grid().size()) throw DomainError("pixel count does not match sensor geometry");
  for (double v : pixels) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("image pixels must be finite and non-negative");
  }
}

IntensityImage render(const ComplexField& field, const SensorConfig& sensor, Provenance provenance) {
  sensor.validate();
  IntensityImage img;
  img.sensor = sensor;
  img.provenance = std::move(provenance);
  img.pixels.assign(sensor.grid().size(), 0.0);
  kernels::parallel::render_intensity(field.function(), sensor.grid(), img.pixels);
  if (sensor.field_of_view() < field.info().required_extent) {
    img.warnings.push_back("truncation: field of view " + std::to_string(sensor.field_of_view()) +
                           " mm is smaller than the beam extent " +
                           std::to_string(field.info().required_extent) + " mm");
  }
  return img;
}

IntensityImage render_state(const ProbeConfig& probe, const QubitState& state, const SensorConfig& sensor,
                            FieldMode mode, const BlochVector& postselection) {
  Provenance prov;
  prov.probe = probe;
  prov.state = state;
  prov.postselection = postselection;
  prov.mode = to_string(mode);
  return render(postselected_field(mode, probe, state, postselection), sensor, std::move(prov));
}

IntensityImage render_mixture(const ProbeConfig& probe, const BlochVector& rho, const SensorConfig& sensor,
                              FieldMode mode, const BlochVector& postselection) {
  const double r = rho.norm();
  if (r > 1.0 + 1e-9) throw DomainError("Bloch vector norm exceeds 1");
  validate_postselection(postselection);
  const BlochVector axis = r > 0.0 ? (1.0 / r) * rho : kNorthPole;
  const double weights[2] = {0.5 * (1.0 + std::min(r, 1.0)), 0.5 * (1.0 - std::min(r, 1.0))};
  const BlochVector dirs[2] = {axis, -axis};

  IntensityImage out;
  out.sensor = sensor;
  out.pixels.assign(sensor.grid().size(), 0.0);
  for (int k = 0; k < 2; ++k) {
    if (weights[k] == 0.0) continue;
    const auto s = QubitState::from_bloch(dirs[k]);
    const auto overlap = std::norm(postselection_ket(postselection).dot(s.ket()));
    if (overlap == 0.0 && (mode == FieldMode::Approx || probe.coupling == 0.0)) continue;
    const auto part = render(postselected_field(mode, probe, s, postselection), sensor);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) out.pixels[i] += weights[k] * part.pixels[i];
    for (const auto& w : part.warnings) {
      if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(w);
    }
  }
  out.provenance.probe = probe;
  out.provenance.bloch = rho;
  out.provenance.postselection = postselection;
  out.provenance.mode = to_string(mode);
  return out;
}

IntensityImage add_shot_noise(const IntensityImage& img, double photon_budget, std::uint64_t seed) {
  if (!(photon_budget > 0.0)) throw DomainError("photon budget must be positive");
  const double total = img.total();
  if (!(total > 0.0)) throw DomainError("cannot add shot noise to an all-zero image");
  const double scale = photon_budget / total;
  std::vector<double> means(img.pixels.size());
  std::transform(img.pixels.begin(), img.pixels.end(), means.begin(), [scale](double v) { return v * scale; });

  IntensityImage out = img;
  kernels::parallel::poisson_counts(means, seed, out.pixels);
  out.provenance.noise_seed = seed;
  out.provenance.photon_budget = photon_budget;
  return out;
}

}  // namespace vortexwm
