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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vortexwm {

/// Argument outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The weak value diverges: the state sits on the projection pole.
class PoleStateError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A stereographic image was requested for the projection pole itself.
class PointAtInfinityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Post-selection succeeds with zero probability.
class OrthogonalPostselectionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed input file. `where` carries a line number or byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string where)
      : std::runtime_error(what + " (" + where + ")"), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Failures of the image-to-state estimation chain.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoVortexFound : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class AmbiguousVortex : public EstimationError {
 public:
  /// Candidate positions (x, y) in millimeters.
  AmbiguousVortex(const std::string& what, std::vector<std::pair<double, double>> candidates)
      : EstimationError(what), candidates_(std::move(candidates)) {}
  const std::vector<std::pair<double, double>>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::pair<double, double>> candidates_;
};

class IllConditionedEstimate : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class DegenerateGeometry : public EstimationError {
 public:
  DegenerateGeometry(const std::string& what, int first, int second)
      : EstimationError(what), first_(first), second_(second) {}
  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }

 private:
  int first_;
  int second_;
};

}  // namespace vortexwm
