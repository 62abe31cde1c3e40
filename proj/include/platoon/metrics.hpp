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

#include <iosfwd>
#include <string>
#include <vector>

#include "platoon/scenario_io.hpp"
#include "platoon/simulation.hpp"

namespace platoon {

/// Transient / steady-state error energy of the leader-relative errors.
struct EnergyMetrics {
  double e_ts = 0.0;
  double e_ss = 0.0;
  double t_s = 0.0;
  double horizon = 0.0;
};

/// Trapezoidal integral over [a, b] of (1/N) sum_i (e_0i^2 + (v_0 - v_i)^2) on
/// the recorded grid; the integrand is interpolated linearly at a and b.
[[nodiscard]] double energy_integral(const Trajectory& traj, double a, double b);

/// E_ts over [0, t_s] and E_ss over [t_s, T]. Throws std::invalid_argument
/// unless 0 < t_s < T.
[[nodiscard]] EnergyMetrics energy_metrics(const Trajectory& traj, double t_s);

struct StringStabilityVerdict {
  double sup_error = 0.0;  // max_i sup_t |e_i(t)|
  double epsilon = 0.0;
  bool pass = false;
};

/// Passes when max_i sup_t |e_i(t)| < epsilon. Throws unless epsilon > 0.
[[nodiscard]] StringStabilityVerdict string_stability_check(const Trajectory& traj, double epsilon);

/// Uses epsilon = max_i max(lower_i, upper_i), the widest funnel half-width.
[[nodiscard]] StringStabilityVerdict string_stability_check(const Trajectory& traj);

struct SweepRow {
  std::string controller;   // "ppc" or "baseline-linear"
  std::string architecture; // "pf" or "bd"
  std::size_t n = 0;
  double e_ts = 0.0;
  double e_ss = 0.0;
  bool violated = false;
  std::string diagnostic;
  double max_abs_u = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
};

struct SweepConfig {
  std::vector<std::size_t> ns;
  std::vector<std::string> controllers;  // architecture names accepted by ControllerChoice::parse
  unsigned jobs = 1;
};

/// Reads Ns / controllers from the document's "sweep" block (if any).
[[nodiscard]] SweepConfig sweep_config_from_document(const Json& base);

/// Scenario document for one sweep row: N followers at the template's gap,
/// the chosen controller with its per-architecture gains from "sweep.gains",
/// and the template seed (every row shares the same random fleet prefix).
/// When "sweep.dt_reference_n" is set the step shrinks with the steady-state
/// bound: dt = dt_template * min(1, bound(N) / bound(dt_reference_n)).
[[nodiscard]] Json sweep_row_document(const Json& base, std::size_t n, const std::string& controller);

/// Runs every (controller, N) row; a row whose run violates an envelope is
/// recorded as violated and the sweep continues. Rows come back ordered by
/// controller then N regardless of jobs.
[[nodiscard]] std::vector<SweepRow> scalability_sweep(const Json& base, const SweepConfig& config);

/// CSV: controller,architecture,N,E_ts,E_ss,violated
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

[[nodiscard]] Json sweep_summary_json(const std::vector<SweepRow>& rows);

}  // namespace platoon
