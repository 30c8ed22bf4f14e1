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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "vortexwm/errors.hpp"
#include "vortexwm/imaging.hpp"
#include "vortexwm/json_io.hpp"
#include "vortexwm/weakvalue.hpp"

namespace vortexwm {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const auto dir = fs::path(::testing::TempDir()) / "vortexwm_imaging";
  fs::create_directories(dir);
  return dir / name;
}

const ProbeConfig kProbe{1.0, 0.05, 1};

TEST(Kernels, RenderIsBitIdenticalAcrossThreadCounts) {
  const auto field = exact_field({1.0, 0.3, 1}, state_from_angles(0.9, 2.0));
  const PixelGrid grid{97, 83, 0.07, {0.01, -0.02}};
  std::vector<double> ref(grid.size());
  kernels::serial::render_intensity(field.function(), grid, ref);
  for (int threads : {1, 2, 3, 4, 7}) {
    std::vector<double> out(grid.size());
    kernels::parallel::render_intensity(field.function(), grid, out, threads);
    EXPECT_EQ(out, ref) << threads << " threads";
  }
}

TEST(Kernels, MomentsAreBitIdenticalAcrossThreadCounts) {
  const auto field = exact_field({1.0, 0.3, 1}, state_from_angles(0.9, 2.0));
  const PixelGrid grid{128, 111, 0.06, {}};
  const auto ref = kernels::serial::intensity_moments(field.function(), grid);
  for (int threads : {1, 2, 3, 5, 8}) {
    const auto m = kernels::parallel::intensity_moments(field.function(), grid, threads);
    EXPECT_EQ(m.mass, ref.mass);
    EXPECT_EQ(m.mx, ref.mx);
    EXPECT_EQ(m.my, ref.my);
  }
}

TEST(Kernels, PoissonCountsAreBitIdenticalAcrossThreadCounts) {
  std::vector<double> means(5000);
  for (std::size_t k = 0; k < means.size(); ++k) means[k] = 0.001 * static_cast<double>(k % 4000);
  std::vector<double> ref(means.size());
  kernels::serial::poisson_counts(means, 42, ref);
  for (int threads : {1, 2, 3, 6}) {
    std::vector<double> out(means.size());
    kernels::parallel::poisson_counts(means, 42, out, threads);
    EXPECT_EQ(out, ref) << threads << " threads";
  }
}

TEST(Kernels, PixelRngIsCounterBased) {
  PixelRng a(7, 100), b(7, 100), c(7, 101), d(8, 100);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

TEST(SensorConfig, Presets) {
  const auto ccd = SensorConfig::paper_ccd();
  EXPECT_DOUBLE_EQ(ccd.pixel_pitch, 0.00645);
  EXPECT_EQ(ccd.width, 1024);
  EXPECT_EQ(ccd.height, 1024);
  const auto fast = SensorConfig::fast(1.0, 512);
  EXPECT_DOUBLE_EQ(fast.field_of_view(), 8.0);
  EXPECT_FALSE(fast.photon_budget);
}

TEST(SensorConfig, Validation) {
  auto s = SensorConfig::fast(1.0);
  s.pixel_pitch = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
  s = SensorConfig::fast(1.0);
  s.width = 15;
  EXPECT_THROW(s.validate(), DomainError);
  EXPECT_THROW(render(lg_field(kProbe), s), DomainError);
}

TEST(Render, CenteredVortexHasPointSymmetry) {
  const auto img = render(lg_field({1.0, 0.0, 1}), SensorConfig::fast(1.0, 128));
  const int w = img.sensor.width, h = img.sensor.height;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) EXPECT_NEAR(img.at(r, c), img.at(h - 1 - r, w - 1 - c), 1e-12);
  }
}

TEST(Render, RingRadiusIsSqrtTwoWaist) {
  const auto sensor = SensorConfig::fast(1.0, 512);
  const auto img = render(lg_field({1.0, 0.0, 1}), sensor);
  const auto it = std::max_element(img.pixels.begin(), img.pixels.end());
  const auto k = static_cast<int>(it - img.pixels.begin());
  const auto p = img.position(k / sensor.width, k % sensor.width);
  EXPECT_NEAR(p.norm(), std::sqrt(2.0), sensor.pixel_pitch);
}

TEST(Render, ExactAndApproxAgreeAtMarginTwenty) {
  const auto sensor = SensorConfig::fast(1.0, 256);
  const auto a = render_state(kProbe, kStateH, sensor, FieldMode::Exact);
  const auto b = render_state(kProbe, kStateH, sensor, FieldMode::Approx);
  double sup = 0.0;
  for (std::size_t k = 0; k < a.pixels.size(); ++k) sup = std::max(sup, std::abs(a.pixels[k] - b.pixels[k]));
  EXPECT_LT(sup, 0.01 * a.max());
}

TEST(Render, RecordsProvenance) {
  const auto s = state_from_angles(0.8, 1.5);
  const auto img = render_state(kProbe, s, SensorConfig::fast(1.0, 64), FieldMode::Approx);
  ASSERT_TRUE(img.provenance.state);
  EXPECT_EQ(*img.provenance.state, s);
  ASSERT_TRUE(img.provenance.probe);
  EXPECT_EQ(img.provenance.probe->coupling, 0.05);
  EXPECT_EQ(img.provenance.mode, "approx");
  EXPECT_TRUE(img.warnings.empty());
}

TEST(Render, SmallSensorWarnsAboutTruncation) {
  auto sensor = SensorConfig::fast(1.0, 64);
  sensor.pixel_pitch = 0.03;
  const auto img = render_state(kProbe, kStateH, sensor, FieldMode::Exact);
  ASSERT_EQ(img.warnings.size(), 1u);
  EXPECT_NE(img.warnings[0].find("truncation"), std::string::npos);
}

TEST(Render, ResolutionConsistency) {
  const auto field = exact_field({1.0, 0.2, 1}, state_from_angles(0.7, 0.9));
  const auto coarse = render(field, SensorConfig::fast(1.0, 128));
  const auto fine = render(field, SensorConfig::fast(1.0, 256));
  const double peak = coarse.max();
  for (int r = 0; r < 128; ++r) {
    for (int c = 0; c < 128; ++c) {
      const double avg =
          0.25 * (fine.at(2 * r, 2 * c) + fine.at(2 * r + 1, 2 * c) + fine.at(2 * r, 2 * c + 1) + fine.at(2 * r + 1, 2 * c + 1));
      EXPECT_NEAR(avg, coarse.at(r, c), 1e-3 * peak);
    }
  }
}

TEST(Render, TotalIntensityConvergesToNorm) {
  SensorConfig sensor = SensorConfig::fast(1.0, 1024);
  sensor.pixel_pitch = 12.0 / 1024;
  for (const auto& field : {lg_field({1.0, 0.0, 1}), exact_field({1.0, 0.4, 1}, state_from_angles(0.5, 1.0))}) {
    const auto img = render(field, sensor);
    EXPECT_NEAR(img.total() * sensor.pixel_pitch * sensor.pixel_pitch, field.info().squared_norm, 1e-4);
  }
}

TEST(Render, MixtureIsProbabilityWeightedSum) {
  const auto sensor = SensorConfig::fast(1.0, 64);
  const BlochVector r{0.3, -0.2, 0.4};
  const auto mix = render_mixture(kProbe, r, sensor, FieldMode::Exact);
  const double len = r.norm();
  const auto plus = QubitState::from_bloch((1 / len) * r);
  const auto minus = QubitState::from_bloch((-1 / len) * r);
  const auto a = render_state(kProbe, plus, sensor, FieldMode::Exact);
  const auto b = render_state(kProbe, minus, sensor, FieldMode::Exact);
  for (std::size_t k = 0; k < mix.pixels.size(); ++k) {
    EXPECT_NEAR(mix.pixels[k], 0.5 * (1 + len) * a.pixels[k] + 0.5 * (1 - len) * b.pixels[k], 1e-14);
  }
  ASSERT_TRUE(mix.provenance.bloch);
  EXPECT_FALSE(mix.provenance.state);
}

TEST(ShotNoise, DeterministicUnderSeed) {
  const auto img = render_state(kProbe, kStateH, SensorConfig::fast(1.0, 128), FieldMode::Exact);
  const auto a = add_shot_noise(img, 1e6, 17);
  const auto b = add_shot_noise(img, 1e6, 17);
  const auto c = add_shot_noise(img, 1e6, 18);
  EXPECT_EQ(a.pixels, b.pixels);
  EXPECT_NE(a.pixels, c.pixels);
}

TEST(ShotNoise, ZeroPixelsStayZero) {
  IntensityImage img;
  img.sensor = SensorConfig::fast(1.0, 16);
  img.pixels.assign(256, 0.0);
  for (std::size_t k = 0; k < 256; k += 3) img.pixels[k] = 1.0;
  const auto noisy = add_shot_noise(img, 1e4, 5);
  for (std::size_t k = 0; k < 256; ++k) {
    if (img.pixels[k] == 0.0) {
      EXPECT_EQ(noisy.pixels[k], 0.0);
    }
    EXPECT_EQ(noisy.pixels[k], std::round(noisy.pixels[k]));
  }
}

TEST(ShotNoise, RelativeSpreadShrinksAsInverseRoot) {
  const auto img = render_state(kProbe, kStateH, SensorConfig::fast(1.0, 64), FieldMode::Exact);
  auto spread = [&](double n) {
    double s2 = 0.0;
    const int seeds = 200;
    for (int seed = 0; seed < seeds; ++seed) {
      const double rel = add_shot_noise(img, n, seed).total() / n - 1.0;
      s2 += rel * rel;
    }
    return std::sqrt(s2 / seeds);
  };
  const double lo = spread(1e3), hi = spread(1e5);
  EXPECT_NEAR(lo * std::sqrt(1e3), 1.0, 0.2);
  EXPECT_NEAR(hi * std::sqrt(1e5), 1.0, 0.2);
  EXPECT_NEAR(lo / hi, 10.0, 3.0);
}

TEST(ShotNoise, KeepsGeometryAndSceneProvenance) {
  auto img = render_state(kProbe, kStateH, SensorConfig::fast(1.0, 64), FieldMode::Exact);
  img.sensor.center_offset = {0.1, -0.2};
  const auto noisy = add_shot_noise(img, 1e5, 3);
  EXPECT_EQ(noisy.sensor.width, img.sensor.width);
  EXPECT_EQ(noisy.sensor.pixel_pitch, img.sensor.pixel_pitch);
  EXPECT_EQ(noisy.sensor.center_offset, img.sensor.center_offset);
  EXPECT_EQ(noisy.provenance.state, img.provenance.state);
  EXPECT_EQ(noisy.provenance.mode, img.provenance.mode);
  EXPECT_EQ(noisy.provenance.noise_seed, 3u);
  EXPECT_EQ(noisy.provenance.photon_budget, 1e5);
  EXPECT_THROW(add_shot_noise(img, 0.0, 1), DomainError);
}

TEST(ImageIo, CsvRoundTripIsExact) {
  auto img = render_state(kProbe, state_from_angles(0.7, 2.0), SensorConfig::fast(1.0, 32), FieldMode::Exact);
  img.sensor.center_offset = {0.125, -0.5};
  const auto path = temp_path("round.csv");
  write_image(path, img);
  EXPECT_TRUE(fs::exists(fs::path(path.string() + ".json")));
  const auto back = read_image(path);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(back.sensor.pixel_pitch, img.sensor.pixel_pitch);
  EXPECT_EQ(back.sensor.center_offset, img.sensor.center_offset);
  ASSERT_TRUE(back.provenance.state);
  EXPECT_EQ(*back.provenance.state, *img.provenance.state);
  EXPECT_EQ(back.position(3, 5), img.position(3, 5));
}

TEST(ImageIo, PgmRoundTripWithinQuantization) {
  const auto img = render_state(kProbe, kStateH, SensorConfig::fast(1.0, 64), FieldMode::Exact);
  const auto path = temp_path("round.pgm");
  write_image(path, img);
  const auto back = read_image(path);
  ASSERT_EQ(back.pixels.size(), img.pixels.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < img.pixels.size(); ++k) worst = std::max(worst, std::abs(back.pixels[k] - img.pixels[k]));
  EXPECT_LE(worst, img.max() / 65535);
  EXPECT_EQ(back.sensor.pixel_pitch, img.sensor.pixel_pitch);
  EXPECT_EQ(back.provenance.probe->w0, 1.0);
}

TEST(ImageIo, PgmCountsRoundTripExactly) {
  const auto img = add_shot_noise(render_state(kProbe, kStateH, SensorConfig::fast(1.0, 64), FieldMode::Exact), 1e5, 9);
  const auto path = temp_path("counts.pgm");
  write_image(path, img);
  const auto back = read_image(path);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(back.provenance.noise_seed, 9u);
}

TEST(ImageIo, FormatFromExtension) {
  EXPECT_EQ(image_format_for("a/b.pgm"), ImageFormat::Pgm16);
  EXPECT_EQ(image_format_for("b.CSV"), ImageFormat::Csv);
  EXPECT_THROW(image_format_for("b.png"), DomainError);
}

TEST(ImageIo, NegativeIntensityIsRejected) {
  const auto img = render(lg_field(kProbe), SensorConfig::fast(1.0, 16));
  const auto path = temp_path("neg.csv");
  write_image(path, img);
  {
    std::ofstream os(path);
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 16; ++c) os << (c ? "," : "") << (r == 4 && c == 2 ? "-1" : "0.5");
      os << '\n';
    }
  }
  try {
    read_image(path);
    FAIL() << "negative intensity accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "line 5");
  }
}

TEST(ImageIo, CsvGeometryMismatchIsExplicit) {
  const auto img = render(lg_field(kProbe), SensorConfig::fast(1.0, 16));
  const auto path = temp_path("short.csv");
  write_image(path, img);
  {
    std::ofstream os(path);
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 15; ++c) os << (c ? "," : "") << "1";
      os << '\n';
    }
  }
  EXPECT_THROW(read_image(path), DomainError);
}

TEST(ImageIo, MalformedGraymapReportsOffset) {
  const auto img = render(lg_field(kProbe), SensorConfig::fast(1.0, 16));
  const auto path = temp_path("bad.pgm");
  write_image(path, img);
  std::string bytes;
  {
    std::ifstream is(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(is), {});
  }
  {
    std::ofstream os(path, std::ios::binary);
    os << bytes.substr(0, bytes.size() - 10);
  }
  try {
    read_image(path);
    FAIL() << "truncated raster accepted";
  } catch (const ParseError& e) {
    EXPECT_NE(e.where().find("byte offset"), std::string::npos);
  }
  {
    std::ofstream os(path, std::ios::binary);
    os << "P2\n16 16\n255\n";
  }
  EXPECT_THROW(read_image(path), ParseError);
}

TEST(ImageIo, GraymapGeometryMismatchIsExplicit) {
  const auto img = render(lg_field(kProbe), SensorConfig::fast(1.0, 16));
  auto header = image_header(img, 1.0);
  header["width"] = 17;
  const auto path = temp_path("mismatch.pgm");
  {
    std::ofstream os(path, std::ios::binary);
    os << "P5\n# vortexwm " << header.dump() << "\n16 16\n65535\n" << std::string(16 * 16 * 2, '\0');
  }
  EXPECT_THROW(read_image(path), DomainError);
}

TEST(ImageIo, HeaderRecordsGeometryAndProvenance) {
  auto img = add_shot_noise(render_state(kProbe, kStateH, SensorConfig::fast(1.0, 16), FieldMode::Exact), 100, 4);
  const auto h = image_header(img, 1.0);
  EXPECT_EQ(h["pixel_pitch_mm"], img.sensor.pixel_pitch);
  EXPECT_EQ(h["provenance"]["probe"]["w0_mm"], 1.0);
  EXPECT_EQ(h["provenance"]["probe"]["g_mm"], 0.05);
  EXPECT_EQ(h["provenance"]["probe"]["l"], 1);
  EXPECT_EQ(h["provenance"]["noise_seed"], 4);
  EXPECT_DOUBLE_EQ(h["pixel_center_affine"]["x0"].get<double>(), img.position(0, 0).x);
  IntensityImage unknown = img;
  unknown.provenance.state.reset();
  EXPECT_EQ(image_header(unknown, 1.0)["provenance"]["state"], "unknown");
}

}  // namespace
}  // namespace vortexwm
