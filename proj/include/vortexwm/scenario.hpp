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
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortexwm/estimation.hpp"
#include "vortexwm/imaging.hpp"

namespace vortexwm {

/// Invalid scenario or calibration input; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct NoiseConfig {
  std::optional<double> photon_budget;
  std::uint64_t seed = 0;
};

/// Where the prepared states come from.
struct StateSource {
  enum class Kind { Explicit, Bloch, Path };
  Kind kind = Kind::Explicit;
  std::vector<QubitState> states;
  BlochVector bloch;
  std::string path;
  int steps = 0;

  /// Explicit list or the sampled path; a pure Bloch vector gives one state.
  std::vector<QubitState> pure_states() const;
};

struct ScenarioConfig {
  ProbeConfig probe;
  double wavelength_nm = 785.0;
  std::string sensor_preset = "paper-ccd";
  SensorConfig sensor = SensorConfig::paper_ccd();
  StateSource source;
  std::vector<BlochVector> postselections{kSouthPole};
  NoiseConfig noise;
  FieldMode mode = FieldMode::Exact;
  std::filesystem::path output_dir = "out";
  ImageFormat image_format = ImageFormat::Pgm16;
  double margin_warning = kDefaultMarginWarning;
  double zip_threshold = kDefaultZipThreshold;

  /// Missing keys take the defaults above. Throws ConfigError.
  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void validate() const;
};

nlohmann::json to_json(const Calibration& cal);
Calibration calibration_from_json(const nlohmann::json& j);
Calibration load_calibration(const std::filesystem::path& path);

/// Shortest round-trip decimal form; used for every CSV number.
std::string csv_number(double v);

}  // namespace vortexwm
