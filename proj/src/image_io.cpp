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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "vortexwm/errors.hpp"
#include "vortexwm/imaging.hpp"
#include "vortexwm/json_io.hpp"

namespace vortexwm {

using nlohmann::json;

namespace {

constexpr const char* kPgmTag = "# vortexwm ";
constexpr int kMaxGray = 65535;

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void check_stream(const std::ios& s, const std::filesystem::path& path) {
  if (!s) throw std::runtime_error("I/O error on " + path.string());
}

// Applies a header written by image_header() to `img`; returns the
// intensity scale.
double apply_header(const json& h, IntensityImage& img, const std::string& where) {
  try {
    img.sensor.pixel_pitch = h.at("pixel_pitch_mm").get<double>();
    img.sensor.width = h.at("width").get<int>();
    img.sensor.height = h.at("height").get<int>();
    const auto& off = h.at("center_offset_mm");
    img.sensor.center_offset = {off.at(0).get<double>(), off.at(1).get<double>()};
    if (h.contains("provenance")) img.provenance = provenance_from_json(h.at("provenance"));
    const auto& aff = h.at("pixel_center_affine");
    const auto g = img.grid();
    if (aff.at("x0").get<double>() != g.x(0) || aff.at("y0").get<double>() != g.y(0) ||
        aff.at("dx").get<double>() != g.pitch || aff.at("dy").get<double>() != g.pitch) {
      throw DomainError("geometry mismatch: pixel-centre mapping disagrees with sensor geometry");
    }
    const double scale = h.value("intensity_scale", 1.0);
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParseError("intensity scale must be positive", where);
    return scale;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad image header: ") + e.what(), where);
  }
}

void write_pgm(const std::filesystem::path& path, const IntensityImage& img) {
  const double peak = img.max();
  bool integral = peak <= kMaxGray;
  for (double v : img.pixels) integral = integral && v == std::floor(v);
  const double scale = integral ? 1.0 : (peak > 0.0 ? peak / kMaxGray : 1.0);

  std::ofstream os(path, std::ios::binary);
  check_stream(os, path);
  os << "P5\n" << kPgmTag << image_header(img, scale).dump() << '\n'
     << img.sensor.width << ' ' << img.sensor.height << '\n' << kMaxGray << '\n';
  std::string data(img.pixels.size() * 2, '\0');
  for (std::size_t k = 0; k < img.pixels.size(); ++k) {
    const auto q = static_cast<std::uint16_t>(std::min<double>(kMaxGray, std::lround(img.pixels[k] / scale)));
    data[2 * k] = static_cast<char>(q >> 8);
    data[2 * k + 1] = static_cast<char>(q & 0xff);
  }
  os.write(data.data(), static_cast<std::streamsize>(data.size()));
  check_stream(os, path);
}

IntensityImage read_pgm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  auto offset = [&] { return "byte offset " + std::to_string(pos); };
  if (bytes.compare(0, 2, "P5") != 0) throw ParseError("not a binary graymap (missing P5 magic)", "byte offset 0");
  pos = 2;

  IntensityImage img;
  std::optional<json> header;
  long fields[3] = {0, 0, 0};
  int got = 0;
  while (got < 3) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos >= bytes.size()) throw ParseError("truncated graymap header", offset());
    if (bytes[pos] == '#') {
      const std::size_t eol = bytes.find('\n', pos);
      if (eol == std::string::npos) throw ParseError("unterminated comment", offset());
      const std::string line = bytes.substr(pos, eol - pos);
      if (line.rfind(kPgmTag, 0) == 0) {
        try {
          header = json::parse(line.substr(std::string(kPgmTag).size()));
        } catch (const json::exception& e) {
          throw ParseError(std::string("bad JSON header: ") + e.what(), offset());
        }
      }
      pos = eol + 1;
      continue;
    }
    const char* first = bytes.data() + pos;
    auto [ptr, ec] = std::from_chars(first, bytes.data() + bytes.size(), fields[got]);
    if (ec != std::errc() || fields[got] <= 0) throw ParseError("bad graymap header field", offset());
    pos += static_cast<std::size_t>(ptr - first);
    ++got;
  }
  ++pos;  // single whitespace before the raster
  const long width = fields[0], height = fields[1], maxval = fields[2];
  if (maxval > kMaxGray) throw ParseError("maxval exceeds 65535", offset());
  const std::size_t bpp = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < pos + n * bpp) throw ParseError("truncated raster", offset());

  double scale = 1.0;
  if (header) {
    scale = apply_header(*header, img, offset());
    if (img.sensor.width != width || img.sensor.height != height) {
      throw DomainError("geometry mismatch: header says " + std::to_string(img.sensor.width) + "x" +
                        std::to_string(img.sensor.height) + ", raster is " + std::to_string(width) + "x" +
                        std::to_string(height));
    }
  } else {
    img.sensor = {1.0, static_cast<int>(width), static_cast<int>(height), {}, std::nullopt};
  }
  img.pixels.resize(n);
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned v = bpp == 2 ? (unsigned(raw[2 * k]) << 8) | raw[2 * k + 1] : raw[k];
    img.pixels[k] = v * scale;
  }
  img.validate();
  return img;
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

void write_csv(const std::filesystem::path& path, const IntensityImage& img) {
  {
    std::ofstream js(sidecar(path));
    check_stream(js, sidecar(path));
    js << image_header(img, 1.0).dump(2) << '\n';
  }
  std::ofstream os(path);
  check_stream(os, path);
  const auto g = img.grid();
  std::string line;
  for (int row = 0; row < g.height; ++row) {
    line.clear();
    for (int col = 0; col < g.width; ++col) {
      if (col) line += ',';
      line += format_double(img.at(row, col));
    }
    line += '\n';
    os << line;
  }
  check_stream(os, path);
}

IntensityImage read_csv(const std::filesystem::path& path) {
  IntensityImage img;
  {
    std::ifstream js(sidecar(path));
    if (!js) throw std::runtime_error("missing sidecar " + sidecar(path).string());
    json h;
    try {
      h = json::parse(js);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad sidecar JSON: ") + e.what(), sidecar(path).string());
    }
    apply_header(h, img, sidecar(path).string());
  }
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  const auto g = img.grid();
  img.pixels.clear();
  img.pixels.reserve(g.size());
  std::string line;
  int row = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(row + 1);
    if (row >= g.height) throw DomainError("geometry mismatch: more rows than the header height");
    int cols = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw ParseError("bad number in column " + std::to_string(cols + 1), where);
      if (!(v >= 0.0) || !std::isfinite(v)) throw ParseError("negative or non-finite intensity", where);
      img.pixels.push_back(v);
      ++cols;
      if (ptr == end) break;
      if (*ptr != ',') throw ParseError("expected ',' after column " + std::to_string(cols), where);
      p = ptr + 1;
    }
    if (cols != g.width) {
      throw DomainError("geometry mismatch at " + where + ": " + std::to_string(cols) + " columns, header says " +
                        std::to_string(g.width));
    }
    ++row;
  }
  if (row != g.height) throw DomainError("geometry mismatch: " + std::to_string(row) + " rows, header says " +
                                         std::to_string(g.height));
  img.validate();
  return img;
}

}  // namespace

json to_json(const BlochVector& r) { return json::array({r.x, r.y, r.z}); }

BlochVector bloch_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw DomainError("Bloch vector must be a 3-element array");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json to_json(const ProbeConfig& p) { return {{"w0_mm", p.w0}, {"g_mm", p.coupling}, {"l", p.charge}}; }

ProbeConfig probe_from_json(const json& j) {
  ProbeConfig p;
  p.w0 = j.value("w0_mm", p.w0);
  p.coupling = j.value("g_mm", p.coupling);
  p.charge = j.value("l", p.charge);
  p.validate();
  return p;
}

json to_json(const Provenance& p) {
  json j;
  j["probe"] = p.probe ? to_json(*p.probe) : json(nullptr);
  if (p.state) {
    j["state"] = {{"theta", p.state->theta()}, {"phi", p.state->phi()}};
  } else {
    j["state"] = "unknown";
  }
  j["bloch"] = p.bloch ? to_json(*p.bloch) : json(nullptr);
  j["postselection"] = to_json(p.postselection);
  j["mode"] = p.mode;
  j["noise_seed"] = p.noise_seed ? json(*p.noise_seed) : json(nullptr);
  j["photon_budget"] = p.photon_budget ? json(*p.photon_budget) : json(nullptr);
  j["command"] = p.command;
  return j;
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  if (j.contains("probe") && !j["probe"].is_null()) p.probe = probe_from_json(j["probe"]);
  if (j.contains("state") && j["state"].is_object()) {
    p.state = QubitState::from_angles(j["state"].at("theta").get<double>(), j["state"].at("phi").get<double>());
  }
  if (j.contains("bloch") && !j["bloch"].is_null()) p.bloch = bloch_from_json(j["bloch"]);
  if (j.contains("postselection")) p.postselection = bloch_from_json(j["postselection"]);
  p.mode = j.value("mode", "");
  if (j.contains("noise_seed") && !j["noise_seed"].is_null()) p.noise_seed = j["noise_seed"].get<std::uint64_t>();
  if (j.contains("photon_budget") && !j["photon_budget"].is_null()) p.photon_budget = j["photon_budget"].get<double>();
  p.command = j.value("command", "");
  return p;
}

json image_header(const IntensityImage& img, double intensity_scale) {
  const auto g = img.grid();
  return {{"format", "vortexwm-image-1"},
          {"width", img.sensor.width},
          {"height", img.sensor.height},
          {"pixel_pitch_mm", img.sensor.pixel_pitch},
          {"center_offset_mm", {img.sensor.center_offset.x, img.sensor.center_offset.y}},
          {"pixel_center_affine", {{"x0", g.x(0)}, {"dx", g.pitch}, {"y0", g.y(0)}, {"dy", g.pitch}}},
          {"intensity_scale", intensity_scale},
          {"provenance", to_json(img.provenance)}};
}

ImageFormat image_format_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pgm") return ImageFormat::Pgm16;
  if (ext == ".csv") return ImageFormat::Csv;
  throw DomainError("unknown image extension '" + ext + "' (expected .pgm or .csv)");
}

void write_image(const std::filesystem::path& path, const IntensityImage& img, ImageFormat format) {
  img.validate();
  if (format == ImageFormat::Pgm16) {
    write_pgm(path, img);
  } else {
    write_csv(path, img);
  }
}

void write_image(const std::filesystem::path& path, const IntensityImage& img) {
  write_image(path, img, image_format_for(path));
}

IntensityImage read_image(const std::filesystem::path& path, ImageFormat format) {
  return format == ImageFormat::Pgm16 ? read_pgm(path) : read_csv(path);
}

IntensityImage read_image(const std::filesystem::path& path) { return read_image(path, image_format_for(path)); }

}  // namespace vortexwm
