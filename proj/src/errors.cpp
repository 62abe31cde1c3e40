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

#include "platoon/errors.hpp"

#include <sstream>

namespace platoon {

namespace {

std::string describe(double value, double lower, double upper) {
  std::ostringstream msg;
  msg.precision(12);
  msg << "normalized error " << value << " outside (" << -lower << ", " << upper << ")";
  return msg.str();
}

std::string describe(const EnvelopeViolation& base, double t, int vehicle, EnvelopeKind kind) {
  std::ostringstream msg;
  msg.precision(12);
  msg << to_string(kind) << " envelope violated at t = " << t << " s, vehicle " << vehicle
      << ": normalized error " << base.value << " outside (" << -base.lower << ", " << base.upper
      << ")";
  return msg.str();
}

}  // namespace

EnvelopeViolation::EnvelopeViolation(double value_, double lower_, double upper_)
    : std::runtime_error(describe(value_, lower_, upper_)),
      value(value_),
      lower(lower_),
      upper(upper_) {}

EnvelopeViolation::EnvelopeViolation(const EnvelopeViolation& base, double t, int vehicle_,
                                     EnvelopeKind kind_)
    : std::runtime_error(describe(base, t, vehicle_, kind_)),
      value(base.value),
      lower(base.lower),
      upper(base.upper),
      time(t),
      vehicle(vehicle_),
      kind(kind_) {}

}  // namespace platoon
