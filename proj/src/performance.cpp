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

#include "platoon/performance.hpp"

#include <sstream>

namespace platoon {

double FormationSpec::offset_from_leader(std::size_t i) const {
  double offset = 0.0;
  for (std::size_t j = 0; j < i; ++j) offset += desired_gaps.at(j);
  return offset;
}

void FormationSpec::validate() const {
  if (desired_gaps.empty()) {
    throw FeasibilityError("formation has no vehicles");
  }
  for (std::size_t k = 0; k < desired_gaps.size(); ++k) {
    const double gap = desired_gaps[k];
    if (!(collision_gap < gap && gap < connectivity_gap)) {
      std::ostringstream msg;
      msg << "infeasible formation: desired gap " << k + 1 << " (vehicle " << k << " -> " << k + 1
          << ") = " << gap << " m is not strictly between collision gap " << collision_gap
          << " m and connectivity gap " << connectivity_gap << " m";
      throw FeasibilityError(msg.str());
    }
  }
}

EnvelopeMargins margins_from_formation(const FormationSpec& spec, std::size_t i) {
  if (i == 0 || i > spec.size()) {
    throw std::out_of_range("margins_from_formation: vehicle index out of range");
  }
  const double gap = spec.desired_gaps[i - 1];
  if (!(spec.collision_gap < gap && gap < spec.connectivity_gap)) {
    std::ostringstream msg;
    msg << "infeasible formation: desired gap " << i << " = " << gap
        << " m is not strictly between collision gap " << spec.collision_gap
        << " m and connectivity gap " << spec.connectivity_gap << " m";
    throw FeasibilityError(msg.str());
  }
  return {gap - spec.collision_gap, spec.connectivity_gap - gap};
}

PerformanceFunction position_envelope(const EnvelopeMargins& m, double steady_bound, double decay) {
  return PerformanceFunction(1.0, steady_bound / m.widest(), decay);
}

PerformanceFunction VelocityEnvelopeSpec::build(double initial_velocity_error) const {
  return PerformanceFunction(scale * std::abs(initial_velocity_error) + floor, floor, decay);
}

void VelocityEnvelopeSpec::validate() const {
  if (!(scale >= 1.0)) throw std::invalid_argument("velocity envelope: scale must be >= 1");
  if (!(floor > 0.0)) throw std::invalid_argument("velocity envelope: floor must be > 0");
  if (!(decay > 0.0)) throw std::invalid_argument("velocity envelope: decay must be > 0");
}

}  // namespace platoon
