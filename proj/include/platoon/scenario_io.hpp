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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "platoon/simulation.hpp"

namespace platoon {

using Json = nlohmann::json;

/// Turns a scenario document into a resolved Scenario.
///
/// Documents may use generator blocks that are expanded with the mandatory
/// "seed": a "fleet" block whose fields are either a number or a [lo, hi]
/// uniform range, a "formation" given as {count, gap}, "initial" given as
/// {offset_fraction, velocity}, and a position envelope whose steady_bound is
/// "sigma-scaled". Explicit arrays (as written by scenario_to_json) are used
/// verbatim. Throws std::invalid_argument naming the offending key.
[[nodiscard]] Scenario resolve_scenario(const Json& doc);

/// Fully explicit document; resolve_scenario(scenario_to_json(s)) == s.
[[nodiscard]] Json scenario_to_json(const Scenario& s);

[[nodiscard]] Json leader_to_json(const LeaderProfile& profile);
[[nodiscard]] LeaderProfile leader_from_json(const Json& j);

/// Applies "a.b.c=value"; value is parsed as JSON when possible, otherwise
/// kept as a string. Intermediate objects are created as needed.
void apply_override(Json& doc, const std::string& assignment);

[[nodiscard]] std::vector<std::string> preset_names();

/// Embedded preset document. Throws std::invalid_argument for unknown names.
[[nodiscard]] Json preset_document(const std::string& name);

/// 64-bit FNV-1a of the canonical explicit JSON, as 16 hex digits.
[[nodiscard]] std::string scenario_hash(const Scenario& s);

/// Steady-state position bound 0.5 sigma_min(S) / sqrt(N) used by the scaling study.
[[nodiscard]] double sigma_scaled_bound(std::size_t n, double factor = 0.5);

}  // namespace platoon
