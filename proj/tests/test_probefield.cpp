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

#include "oracles.hpp"
#include "vortexwm/errors.hpp"
#include "vortexwm/estimation.hpp"
#include "vortexwm/imaging.hpp"
#include "vortexwm/probefield.hpp"
#include "vortexwm/weakvalue.hpp"

namespace vortexwm {
namespace {

oracle::Ket as_ket(const QubitState& s) { return oracle::ket(s.theta(), s.phi()); }

// Window wide enough that the neglected tail is far below every tolerance here.
double wide_extent(const ProbeConfig& cfg, Complex w) { return 16 * cfg.w0 + 2 * cfg.coupling * std::max(1.0, std::abs(w)); }

TEST(ProbeConfig, Validation) {
  EXPECT_NO_THROW((ProbeConfig{1.0, 0.0, 1}.validate()));
  EXPECT_THROW((ProbeConfig{0.0, 0.05, 1}.validate()), DomainError);
  EXPECT_THROW((ProbeConfig{1.0, -0.1, 1}.validate()), DomainError);
  EXPECT_THROW((ProbeConfig{1.0, 0.05, 0}.validate()), DomainError);
  EXPECT_NO_THROW((ProbeConfig{1.0, 0.05, 2}.validate()));
  EXPECT_THROW((ProbeConfig{1.0, 0.05, 2}.validate_exact()), DomainError);
  EXPECT_THROW(exact_field(ProbeConfig{1.0, 0.05, 2}, kStateH), DomainError);
}

TEST(LgAmplitude, VanishesAtOrigin) {
  for (int l = 1; l <= 3; ++l) EXPECT_EQ(std::abs(lg_amplitude({1.0, 0.0, l}, 0.0, 0.0)), 0.0);
}

TEST(LgAmplitude, NormalizationConstant) {
  EXPECT_NEAR(lg_normalization({2.0, 0.0, 1}), 1.0 / (4 * kPi * 16.0), 1e-18);
  EXPECT_NEAR(std::abs(lg_amplitude({1.3, 0.0, 1}, 0.4, -0.7) - oracle::lg1(1.3, 0.4, -0.7)), 0.0, 1e-16);
}

TEST(LgAmplitude, UnitNormByQuadrature) {
  for (int l = 1; l <= 3; ++l) {
    const ProbeConfig cfg{1.0, 0.0, l};
    const auto q = oracle::quadrature([&](double x, double y) { return std::norm(lg_amplitude(cfg, x, y)); }, 512, 20.0);
    EXPECT_NEAR(q.mass, 1.0, 1e-6) << "l = " << l;
  }
}

TEST(LgAmplitude, RotationInvariantIntensity) {
  const ProbeConfig cfg{1.0, 0.0, 1};
  for (double x = -2.0; x < 2.0; x += 0.37) {
    for (double y = -2.0; y < 2.0; y += 0.41) {
      EXPECT_EQ(std::abs(lg_amplitude(cfg, x, y)), std::abs(lg_amplitude(cfg, -y, x)));
    }
  }
}

TEST(LgField, CarriesNormalizationMetadata) {
  const auto f = lg_field({1.0, 0.0, 1});
  EXPECT_TRUE(f.info().normalized);
  EXPECT_DOUBLE_EQ(f.info().squared_norm, 1.0);
}

TEST(ExactField, MatchesAmplitudeOracle) {
  const ProbeConfig cfg{1.2, 0.3, 1};
  for (double th = 0.1; th <= kPi / 2; th += 0.3) {
    for (double ph = 0.0; ph < kTwoPi; ph += 1.1) {
      const auto s = state_from_angles(th, ph);
      for (double x = -2; x <= 2; x += 0.7) {
        for (double y = -2; y <= 2; y += 0.9) {
          const auto e = oracle::exact_field(cfg.w0, cfg.coupling, as_ket(s), x, y);
          EXPECT_NEAR(std::abs(exact_postselected_field(cfg, s, x, y) - e), 0.0, 1e-15);
        }
      }
    }
  }
}

TEST(ExactField, HorizontalIsSingleShiftedVortex) {
  const ProbeConfig cfg{1.0, 0.2, 1};
  const auto f = exact_field(cfg, kStateH);
  EXPECT_LT(std::abs(f(0.2, 0.0)), 1e-16);
  for (double x = -1.5; x < 1.5; x += 0.3) {
    const Complex expect = kStateH.amp1() * lg_amplitude(cfg, x - 0.2, 0.4);
    EXPECT_NEAR(std::abs(f(x, 0.4) - expect), 0.0, 1e-15);
  }
}

TEST(ExactField, MinusOneWeakValueShiftsLeft) {
  const ProbeConfig cfg{1.0, 0.2, 1};
  const auto s = state_from_angles(kPi / 4, kPi);
  EXPECT_LT(std::abs(exact_field(cfg, s)(-0.2, 0.0)), 1e-16);
}

TEST(ExactField, SouthPoleIsMirrorSymmetric) {
  const auto f = exact_field({1.0, 0.3, 1}, kStateOne);
  for (double x = 0.1; x < 2; x += 0.3) {
    for (double y = -1; y < 1; y += 0.3) EXPECT_NEAR(f.intensity(x, y), f.intensity(-x, y), 1e-15);
  }
}

TEST(ExactField, OrthogonalPostselectionWithoutCouplingIsRejected) {
  EXPECT_THROW(exact_field({1.0, 0.0, 1}, kStateZero), OrthogonalPostselectionError);
  EXPECT_NO_THROW(exact_field({1.0, 0.1, 1}, kStateZero));
}

TEST(ExactField, NormMatchesQuadrature) {
  const ProbeConfig cfg{1.0, 0.5, 1};
  for (double th = 0.2; th <= kPi / 2; th += 0.35) {
    const auto s = state_from_angles(th, 0.8);
    const auto q = oracle::quadrature(
        [&](double x, double y) { return std::norm(oracle::exact_field(cfg.w0, cfg.coupling, as_ket(s), x, y)); },
        400, 18.0);
    EXPECT_NEAR(exact_field_norm(cfg, s), q.mass, 1e-6);
    EXPECT_NEAR(exact_field(cfg, s).info().squared_norm, q.mass, 1e-6);
  }
}

TEST(Eta, EndpointValues) {
  EXPECT_DOUBLE_EQ(eta({1.0, 0.0, 1}), 1.0);
  EXPECT_NEAR(eta({1.0, std::sqrt(2.0), 1}), 0.0, 1e-15);
}

TEST(AnalyticCentroid, ZeroCouplingIsOrigin) {
  const auto c = analytic_centroid({1.0, 0.0, 1}, state_from_angles(0.6, 2.0));
  EXPECT_EQ(c.x, 0.0);
  EXPECT_EQ(c.y, 0.0);
}

TEST(AnalyticCentroid, HorizontalGivesCouplingForAnyG) {
  for (double g : {0.01, 0.3, 1.0, 2.0}) {
    const auto c = analytic_centroid({1.0, g, 1}, kStateH);
    EXPECT_NEAR(c.x, g, 1e-14);
    EXPECT_NEAR(c.y, 0.0, 1e-15);
  }
}

TEST(AnalyticCentroid, PoleStateIsRejected) {
  EXPECT_THROW(analytic_centroid({1.0, 0.05, 1}, kStateZero), PoleStateError);
}

TEST(Quadrature, CenteredVortexIsAtOrigin) {
  const auto q = centroid_by_quadrature(lg_field({1.0, 0.0, 1}), 128, 12.0);
  EXPECT_NEAR(q.centroid.x, 0.0, 1e-12);
  EXPECT_NEAR(q.centroid.y, 0.0, 1e-12);
  EXPECT_FALSE(q.truncated);
}

TEST(Quadrature, ArgumentChecks) {
  const auto f = lg_field({1.0, 0.0, 1});
  EXPECT_THROW(centroid_by_quadrature(f, 32, 10.0), DomainError);
  EXPECT_THROW(centroid_by_quadrature(f, 128, 0.0), DomainError);
}

TEST(Quadrature, SmallWindowIsFlaggedAsTruncated) {
  const auto q = centroid_by_quadrature(lg_field({1.0, 0.0, 1}), 128, 3.0);
  EXPECT_TRUE(q.truncated);
  EXPECT_GT(q.tail_mass, 0.1);
}

TEST(Quadrature, HorizontalCentroidIsCoupling) {
  for (double g : {0.05, 0.5, 1.0}) {
    const ProbeConfig cfg{1.0, g, 1};
    const auto q = centroid_by_quadrature(exact_field(cfg, kStateH), 256, wide_extent(cfg, 1.0));
    EXPECT_NEAR(q.centroid.x, g, 1e-9);
    EXPECT_NEAR(q.centroid.y, 0.0, 1e-12);
  }
}

TEST(Quadrature, ImaginaryWeakValueFixesSign) {
  // w = -i: x must vanish; |y| = G e^{-G^2/2w0^2} / D, and its sign fixes s.
  const ProbeConfig cfg{1.0, 0.05, 1};
  const auto s = state_from_angles(kPi / 4, kPi / 2);
  const Complex w = weak_value_pure(s).value;
  const auto o = oracle::quadrature(
      [&](double x, double y) { return std::norm(oracle::exact_field(cfg.w0, cfg.coupling, as_ket(s), x, y)); }, 512,
      wide_extent(cfg, w));
  const double d = 0.5 * (1 + std::norm(w) + eta(cfg) * (1 - std::norm(w)));
  const double mag = cfg.coupling * std::exp(-0.5 * cfg.coupling * cfg.coupling) / d;
  EXPECT_NEAR(o.x, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(o.y), mag, 1e-10);
  const double s_measured = o.y / (mag * w.imag());
  EXPECT_NEAR(s_measured, kCentroidYSign, 1e-8);
  EXPECT_EQ(kCentroidYSign, -1.0);
}

TEST(Quadrature, AnalyticCentroidHoldsBeyondWeakRegime) {
  int pos = 0, neg = 0;
  for (double g : {0.05, 0.5, 1.0}) {
    const ProbeConfig cfg{1.0, g, 1};
    for (int i = 0; i < 5; ++i) {
      const double th = kPi / 16 + i * (kPi / 2 - kPi / 16) / 4;
      for (int j = 0; j < 8; ++j) {
        const auto s = state_from_angles(th, 0.2 + j * kPi / 4);
        const Complex w = weak_value_pure(s).value;
        const auto a = analytic_centroid(cfg, s);
        const auto q = centroid_by_quadrature(exact_field(cfg, s), 256, wide_extent(cfg, w));
        EXPECT_NEAR(a.x, q.centroid.x, 1e-6);
        EXPECT_NEAR(std::abs(a.y), std::abs(q.centroid.y), 1e-6);
        if (std::abs(a.y) > 1e-6) (a.y * q.centroid.y > 0 ? pos : neg)++;
      }
    }
  }
  // One global sign: analytic y carries it already, so every cell agrees.
  EXPECT_GT(pos, 0);
  EXPECT_EQ(neg, 0);
}

TEST(Quadrature, LibraryAndOracleAgree) {
  const ProbeConfig cfg{1.0, 0.5, 1};
  const auto s = state_from_angles(1.0, 2.5);
  const double ext = wide_extent(cfg, weak_value_pure(s).value);
  const auto lib = centroid_by_quadrature(exact_field(cfg, s), 256, ext);
  const auto o = oracle::quadrature(
      [&](double x, double y) { return std::norm(oracle::exact_field(cfg.w0, cfg.coupling, as_ket(s), x, y)); }, 256,
      ext);
  EXPECT_NEAR(lib.centroid.x, o.x, 1e-12);
  EXPECT_NEAR(lib.centroid.y, o.y, 1e-12);
  EXPECT_NEAR(lib.mass, o.mass, 1e-12);
}

TEST(ApproxField, ZeroCouplingIsUndisplacedProbe) {
  const ProbeConfig cfg{1.0, 0.0, 1};
  const auto s = state_from_angles(0.7, 1.3);
  for (double x = -1; x < 1; x += 0.3) {
    EXPECT_NEAR(std::abs(approx_postselected_field(cfg, s, x, 0.2) - s.amp1() * lg_amplitude(cfg, x, 0.2)), 0.0, 1e-16);
  }
}

TEST(ApproxField, SouthPoleVortexAtOrigin) {
  EXPECT_LT(std::abs(approx_field({1.0, 0.1, 1}, kStateOne)(0.0, 0.0)), 1e-16);
}

TEST(ApproxField, IntensityMatchesDisplacedForm) {
  const ProbeConfig cfg{1.0, 0.1, 1};
  const auto s = state_from_angles(0.6, 2.2);
  const Complex w = weak_value_pure(s).value;
  const auto f = approx_field(cfg, s);
  double ratio = 0.0;
  for (double x = -1.5; x < 1.5; x += 0.37) {
    for (double y = -1.5; y < 1.5; y += 0.31) {
      const double dx = x - cfg.coupling * w.real(), dy = y - cfg.coupling * w.imag();
      const double form = (dx * dx + dy * dy) * std::exp(-(dx * dx + y * y) / 2.0);
      const double r = f.intensity(x, y) / form;
      if (ratio == 0.0) ratio = r;
      EXPECT_NEAR(r / ratio, 1.0, 1e-12);
    }
  }
}

TEST(ApproxField, HigherChargeZeroAtDisplacement) {
  const ProbeConfig cfg{1.0, 0.05, 2};
  const auto s = state_from_angles(0.9, 0.4);
  const Complex w = weak_value_pure(s).value;
  EXPECT_LT(std::abs(approx_field(cfg, s)(cfg.coupling * w.real(), cfg.coupling * w.imag())), 1e-15);
}

TEST(ApproxField, PoleStateIsRejected) { EXPECT_THROW(approx_field({1.0, 0.05, 1}, kStateZero), PoleStateError); }

TEST(ApproxField, RenderedZipOfHorizontal) {
  const ProbeConfig cfg{1.0, 0.05, 1};
  const auto sensor = SensorConfig::fast(1.0, 256);
  const auto field = approx_field(cfg, kStateH);
  const auto img = render(field, sensor);
  const auto zip = locate_field_zero(field, extract_zip(img).position, 1e-4);
  EXPECT_NEAR(zip.x, 0.05, 0.1 * sensor.pixel_pitch);
  EXPECT_NEAR(zip.y, 0.0, 0.1 * sensor.pixel_pitch);
}

TEST(MirrorSymmetry, ConjugateStateReflectsIntensity) {
  const ProbeConfig cfg{1.0, 0.3, 1};
  for (double th = 0.2; th < kPi / 2; th += 0.4) {
    for (double ph = 0.3; ph < kTwoPi; ph += 0.9) {
      const auto s = state_from_angles(th, ph);
      const auto c = state_from_angles(th, -ph);
      for (auto mode : {FieldMode::Exact, FieldMode::Approx}) {
        const auto a = postselected_field(mode, cfg, s);
        const auto b = postselected_field(mode, cfg, c);
        for (double x = -2; x < 2; x += 0.3) {
          for (double y = -2; y < 2; y += 0.35) EXPECT_NEAR(a.intensity(x, y), b.intensity(x, -y), 1e-12);
        }
      }
    }
  }
}

TEST(WeakLimit, FieldZeroConvergesFasterThanCoupling) {
  for (const auto& s : {state_from_angles(1.0, 0.7), state_from_angles(0.6, 4.0), state_from_angles(1.3, 2.5)}) {
    const Complex w = weak_value_pure(s).value;
    ASSERT_LE(std::abs(w), 2.0);
    std::vector<double> err;
    for (double g : {0.1, 0.05, 0.025}) {
      const ProbeConfig cfg{1.0, g, 1};
      const auto zero = locate_field_zero(exact_field(cfg, s), {g * w.real(), g * w.imag()}, 1e-4);
      err.push_back(std::hypot(zero.x - g * w.real(), zero.y - g * w.imag()));
    }
    EXPECT_LT(err[1] / err[0], 0.6);
    EXPECT_LT(err[2] / err[1], 0.6);
  }
}

TEST(FieldMode, StringRoundTrip) {
  EXPECT_EQ(field_mode_from_string("exact"), FieldMode::Exact);
  EXPECT_EQ(field_mode_from_string(to_string(FieldMode::Approx)), FieldMode::Approx);
  EXPECT_THROW(field_mode_from_string("fuzzy"), DomainError);
}

}  // namespace
}  // namespace vortexwm
