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

// JSON encodings shared by image headers, configs and calibration records.

#include <json.hpp>

#include "vortexwm/imaging.hpp"

namespace vortexwm {

nlohmann::json to_json(const BlochVector& r);
BlochVector bloch_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ProbeConfig& p);
ProbeConfig probe_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Provenance& p);
Provenance provenance_from_json(const nlohmann::json& j);

/// Geometry, intensity scale and provenance of an image.
nlohmann::json image_header(const IntensityImage& img, double intensity_scale);

}  // namespace vortexwm
