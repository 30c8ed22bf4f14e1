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

namespace vortexwm {

/// Probe beam and coupling. Lengths are in millimetres.
///
/// The Gaussian envelope is exp(-(x^2 + y^2) / (4 w0^2)), so w0 is the rms
/// width of the intensity profile. `coupling` is G = g/hbar, the transverse
/// displacement per unit weak value.
struct ProbeConfig {
  double w0 = 1.0;
  double coupling = 0.05;
  int charge = 1;

  /// Throws DomainError unless w0 > 0, coupling >= 0, charge >= 1.
  void validate() const;
  /// Also requires charge == 1.
  void validate_exact() const;
};

}  // namespace vortexwm
