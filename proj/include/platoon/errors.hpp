/*
 * Copyright 2026 The platoon-ppc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace platoon {

enum class EnvelopeKind { Position, Velocity };

inline const char* to_string(EnvelopeKind kind) {
  return kind == EnvelopeKind::Position ? "position" : "velocity";
}

/// A normalized error reached or left the open interval (-lower, upper).
///
/// Raised by the barrier primitives with only (value, lower, upper) set; the
/// simulator rethrows with the time, vehicle and envelope filled in.
class EnvelopeViolation : public std::runtime_error {
 public:
  EnvelopeViolation(double value, double lower, double upper);
  EnvelopeViolation(const EnvelopeViolation& base, double t, int vehicle, EnvelopeKind kind);

  double value;
  double lower;
  double upper;
  double time = std::numeric_limits<double>::quiet_NaN();
  int vehicle = -1;  // 1-based follower index, -1 when unknown
  EnvelopeKind kind = EnvelopeKind::Position;
};

/// Formation or initial state incompatible with the collision/connectivity gaps.
class FeasibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace platoon
