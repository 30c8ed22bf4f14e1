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

#include "vortexwm/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "vortexwm/errors.hpp"
#include "vortexwm/json_io.hpp"

namespace vortexwm {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key, e.what());
  }
}

QubitState state_from_json(const json& j, const std::string& where) {
  try {
    return QubitState::from_angles(j.at("theta").get<double>(), j.at("phi").get<double>());
  } catch (const json::exception& e) {
    throw ConfigError(where, e.what());
  } catch (const DomainError& e) {
    throw ConfigError(where, e.what());
  }
}

BlochVector vector_from_json(const json& j, const std::string& where) {
  try {
    return bloch_from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError(where, e.what());
  }
}

}  // namespace

std::vector<QubitState> StateSource::pure_states() const {
  switch (kind) {
    case Kind::Explicit:
      return states;
    case Kind::Bloch:
      return {QubitState::from_bloch(bloch)};
    case Kind::Path:
      return path == "equator" ? equator_path(steps) : infinity_path(steps);
  }
  return {};
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  ScenarioConfig c;
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");

  if (j.contains("probe")) {
    const auto& p = j["probe"];
    c.probe.w0 = get_or(p, "w0_mm", c.probe.w0, "probe");
    c.probe.coupling = get_or(p, "g_mm", c.probe.coupling, "probe");
    c.probe.charge = get_or(p, "l", c.probe.charge, "probe");
    c.wavelength_nm = get_or(p, "wavelength_nm", c.wavelength_nm, "probe");
  }

  if (j.contains("sensor")) {
    const auto& s = j["sensor"];
    c.sensor_preset = get_or<std::string>(s, "preset", "", "sensor");
    if (c.sensor_preset == "paper-ccd") {
      c.sensor = SensorConfig::paper_ccd();
    } else if (c.sensor_preset == "fast") {
      c.sensor = SensorConfig::fast(c.probe.w0, get_or(s, "n", 256, "sensor"));
    } else if (!c.sensor_preset.empty()) {
      throw ConfigError("sensor.preset", "unknown preset '" + c.sensor_preset + "' (expected paper-ccd|fast)");
    }
    c.sensor.pixel_pitch = get_or(s, "pixel_pitch_mm", c.sensor.pixel_pitch, "sensor");
    c.sensor.width = get_or(s, "width", c.sensor.width, "sensor");
    c.sensor.height = get_or(s, "height", c.sensor.height, "sensor");
    if (s.contains("center_offset_mm")) {
      const auto& o = s["center_offset_mm"];
      if (!o.is_array() || o.size() != 2) throw ConfigError("sensor.center_offset_mm", "expected [x, y]");
      c.sensor.center_offset = {o[0].get<double>(), o[1].get<double>()};
    }
    if (c.sensor_preset.empty()) c.sensor_preset = "custom";
  }

  if (j.contains("states")) {
    const auto& s = j["states"];
    const auto kind = get_or<std::string>(s, "kind", "explicit", "states");
    if (kind == "explicit") {
      c.source.kind = StateSource::Kind::Explicit;
      if (!s.contains("list") || !s["list"].is_array()) throw ConfigError("states.list", "expected an array");
      for (std::size_t k = 0; k < s["list"].size(); ++k) {
        c.source.states.push_back(state_from_json(s["list"][k], "states.list[" + std::to_string(k) + "]"));
      }
    } else if (kind == "bloch") {
      c.source.kind = StateSource::Kind::Bloch;
      if (!s.contains("vector")) throw ConfigError("states.vector", "missing");
      c.source.bloch = vector_from_json(s["vector"], "states.vector");
    } else if (kind == "path") {
      c.source.kind = StateSource::Kind::Path;
      c.source.path = get_or<std::string>(s, "path", "", "states");
      c.source.steps = get_or(s, "steps", 0, "states");
    } else {
      throw ConfigError("states.kind", "unknown kind '" + kind + "' (expected explicit|bloch|path)");
    }
  }

  if (j.contains("postselections")) {
    const auto& ps = j["postselections"];
    if (!ps.is_array()) throw ConfigError("postselections", "expected an array of [x, y, z]");
    c.postselections.clear();
    for (std::size_t k = 0; k < ps.size(); ++k) {
      c.postselections.push_back(vector_from_json(ps[k], "postselections[" + std::to_string(k) + "]"));
    }
  }

  if (j.contains("noise") && !j["noise"].is_null()) {
    const auto& n = j["noise"];
    if (n.is_string() && n.get<std::string>() == "noiseless") {
      c.noise = {};
    } else if (n.is_object()) {
      if (n.contains("photon_budget") && !n["photon_budget"].is_null()) {
        c.noise.photon_budget = get_or(n, "photon_budget", 0.0, "noise");
      }
      c.noise.seed = get_or<std::uint64_t>(n, "seed", 0, "noise");
    } else {
      throw ConfigError("noise", "expected \"noiseless\" or {photon_budget, seed}");
    }
  }

  try {
    c.mode = field_mode_from_string(get_or<std::string>(j, "mode", "exact", ""));
  } catch (const DomainError& e) {
    throw ConfigError("mode", e.what());
  }
  c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir.string(), "");
  const auto fmt = get_or<std::string>(j, "image_format", "pgm", "");
  if (fmt == "pgm") {
    c.image_format = ImageFormat::Pgm16;
  } else if (fmt == "csv") {
    c.image_format = ImageFormat::Csv;
  } else {
    throw ConfigError("image_format", "expected pgm|csv");
  }
  c.margin_warning = get_or(j, "margin_warning", c.margin_warning, "");
  c.zip_threshold = get_or(j, "zip_threshold", c.zip_threshold, "");
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("--config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("--config", e.what());
  }
  return from_json(j);
}

void ScenarioConfig::validate() const {
  auto wrap = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      throw ConfigError(field, e.what());
    }
  };
  wrap("probe", [&] { probe.validate(); });
  if (mode == FieldMode::Exact) wrap("probe.l", [&] { probe.validate_exact(); });
  wrap("sensor", [&] { sensor.validate(); });
  if (postselections.empty()) throw ConfigError("postselections", "at least one post-selection is required");
  for (std::size_t k = 0; k < postselections.size(); ++k) {
    const auto field = "postselections[" + std::to_string(k) + "]";
    wrap(field.c_str(), [&] { validate_postselection(postselections[k]); });
  }
  switch (source.kind) {
    case StateSource::Kind::Explicit:
      if (source.states.empty()) throw ConfigError("states.list", "no states given");
      break;
    case StateSource::Kind::Bloch:
      if (source.bloch.norm() > 1.0 + 1e-9) throw ConfigError("states.vector", "Bloch vector norm exceeds 1");
      break;
    case StateSource::Kind::Path:
      if (source.path != "equator" && source.path != "infinity") {
        throw ConfigError("states.path", "expected equator|infinity");
      }
      if (source.steps < 2) throw ConfigError("states.steps", "need at least 2 steps");
      break;
  }
  if (noise.photon_budget && !(*noise.photon_budget > 0.0)) throw ConfigError("noise.photon_budget", "must be > 0");
  if (!(zip_threshold > 0.0 && zip_threshold < 0.5)) throw ConfigError("zip_threshold", "must lie in (0, 0.5)");
  if (!(margin_warning >= 0.0)) throw ConfigError("margin_warning", "must be >= 0");
}

json ScenarioConfig::to_json() const {
  json j;
  j["probe"] = vortexwm::to_json(probe);
  j["probe"]["wavelength_nm"] = wavelength_nm;
  j["sensor"] = {{"preset", sensor_preset},
                 {"pixel_pitch_mm", sensor.pixel_pitch},
                 {"width", sensor.width},
                 {"height", sensor.height},
                 {"center_offset_mm", {sensor.center_offset.x, sensor.center_offset.y}}};
  switch (source.kind) {
    case StateSource::Kind::Explicit: {
      json list = json::array();
      for (const auto& s : source.states) list.push_back({{"theta", s.theta()}, {"phi", s.phi()}});
      j["states"] = {{"kind", "explicit"}, {"list", list}};
      break;
    }
    case StateSource::Kind::Bloch:
      j["states"] = {{"kind", "bloch"}, {"vector", vortexwm::to_json(source.bloch)}};
      break;
    case StateSource::Kind::Path:
      j["states"] = {{"kind", "path"}, {"path", source.path}, {"steps", source.steps}};
      break;
  }
  j["postselections"] = json::array();
  for (const auto& f : postselections) j["postselections"].push_back(vortexwm::to_json(f));
  if (noise.photon_budget) {
    j["noise"] = {{"photon_budget", *noise.photon_budget}, {"seed", noise.seed}};
  } else {
    j["noise"] = "noiseless";
  }
  j["mode"] = to_string(mode);
  j["output_dir"] = output_dir.string();
  j["image_format"] = image_format == ImageFormat::Pgm16 ? "pgm" : "csv";
  j["margin_warning"] = margin_warning;
  j["zip_threshold"] = zip_threshold;
  return j;
}

json to_json(const Calibration& cal) {
  return {{"origin_mm", {cal.origin.x, cal.origin.y}}, {"scale_mm", cal.scale}, {"orientation_rad", cal.orientation}};
}

Calibration calibration_from_json(const json& j) {
  Calibration c;
  try {
    const auto& o = j.at("origin_mm");
    if (!o.is_array() || o.size() != 2) throw ConfigError("origin_mm", "expected [x, y]");
    c.origin = {o[0].get<double>(), o[1].get<double>()};
    c.scale = j.at("scale_mm").get<double>();
    c.orientation = j.value("orientation_rad", 0.0);
  } catch (const json::exception& e) {
    throw ConfigError("calibration", e.what());
  }
  if (!(c.scale > 0.0)) throw ConfigError("scale_mm", "must be positive");
  return c;
}

Calibration load_calibration(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("--cal", "cannot open " + path.string());
  try {
    return calibration_from_json(json::parse(is));
  } catch (const json::exception& e) {
    throw ConfigError("--cal", e.what());
  }
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace vortexwm
