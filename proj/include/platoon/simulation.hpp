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

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "platoon/errors.hpp"
#include "platoon/model.hpp"
#include "platoon/performance.hpp"
#include "platoon/protocols.hpp"

namespace platoon {

enum class ControlMode { Dynamic, Kinematic };

[[nodiscard]] const char* to_string(ControlMode mode);
[[nodiscard]] ControlMode control_mode_from_string(const std::string& name);

/// How the position funnel settles. Exactly one of steady_bound (metres on the
/// wider side, rho_inf = steady_bound / max(lower, upper)) or rho_inf
/// (normalized floor) is used; steady_bound wins when both are set.
struct PositionEnvelopeSpec {
  double decay = 0.1;
  std::optional<double> steady_bound = 0.05;
  std::optional<double> rho_inf;

  [[nodiscard]] PerformanceFunction build(const EnvelopeMargins& margins) const;

  friend bool operator==(const PositionEnvelopeSpec&, const PositionEnvelopeSpec&) = default;
};

/// Fully resolved simulation description (no random draws left).
struct Scenario {
  std::string name = "custom";
  std::uint64_t seed = 0;
  std::vector<VehicleParams> vehicles;
  std::vector<Disturbance> disturbances;
  LeaderProfile leader;
  FormationSpec formation;
  ControlGains gains;
  BaselineGains baseline_gains;
  ControllerChoice controller;
  PositionEnvelopeSpec position_envelope;
  VelocityEnvelopeSpec velocity_envelope;
  double initial_leader_position = 0.0;
  std::vector<double> initial_positions;
  std::vector<double> initial_velocities;
  ControlMode mode = ControlMode::Dynamic;
  double dt = 1e-3;
  double horizon = 120.0;  // T
  std::size_t record_stride = 10;
  double transient_time = 50.0;  // t_s for the energy metrics

  [[nodiscard]] std::size_t size() const noexcept { return vehicles.size(); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// A scenario whose invariants hold, with the per-vehicle funnels fixed.
struct ValidatedScenario {
  Scenario scenario;
  std::vector<EnvelopeMargins> margins;
  std::vector<PerformanceFunction> position_envelopes;
  std::vector<PerformanceFunction> velocity_envelopes;  // empty in kinematic / baseline runs
  VectorX<> initial_velocity_errors;

  [[nodiscard]] std::size_t size() const noexcept { return scenario.size(); }
  [[nodiscard]] bool uses_envelopes() const noexcept {
    return scenario.controller.controller == ControllerKind::PrescribedPerformance;
  }
};

/// Checks sizes, the formation, the initial gaps against the collision and
/// connectivity distances, and integration settings; then builds the funnels,
/// evaluating v_d at t = 0 to size the velocity funnels.
/// Throws FeasibilityError or std::invalid_argument with the offending item named.
[[nodiscard]] ValidatedScenario validate_scenario(const Scenario& s);

/// Integrated state: [p0, p_1..p_N] and, in dynamic mode, [v_1..v_N].
using StateVector = VectorX<>;

[[nodiscard]] StateVector initial_state(const ValidatedScenario& vs);

/// Everything the controller computes at one instant.
struct ClosedLoopSignals {
  double leader_velocity = 0.0;
  VectorX<> velocity;       // actual (dynamic) or commanded (kinematic)
  VectorX<> position_error;
  VectorX<> xi_p;
  VectorX<> rho_p;
  VectorX<> reference_velocity;
  VectorX<> velocity_error;
  VectorX<> xi_v;
  VectorX<> rho_v;
  VectorX<> control;        // force (dynamic) or commanded velocity (kinematic)
};

/// Evaluates the controller at (state, t). Throws EnvelopeViolation carrying
/// time, vehicle and envelope kind when any normalized error leaves its funnel.
[[nodiscard]] ClosedLoopSignals evaluate_signals(const ValidatedScenario& vs, const StateVector& state, double t);

/// d/dt of the state vector, including p0' = v0(t).
[[nodiscard]] StateVector closed_loop_derivative(const ValidatedScenario& vs, const StateVector& state, double t);

/// Recorded samples; matrices are samples x N.
struct Trajectory {
  using Table = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::vector<double> time;
  std::vector<double> leader_position;
  std::vector<double> leader_velocity;
  Table position, velocity, position_error, leader_error, xi_p, reference_velocity, velocity_error, xi_v,
      control, rho_p, rho_v;
  std::vector<EnvelopeMargins> margins;
  std::vector<double> desired_gaps;
  double collision_gap = 0.0;
  double connectivity_gap = 0.0;

  [[nodiscard]] std::size_t samples() const noexcept { return time.size(); }
  [[nodiscard]] std::size_t vehicles() const noexcept { return static_cast<std::size_t>(position.cols()); }
};

struct RunOutcome {
  Trajectory trajectory;  // truncated at the last clean sample when violated
  std::optional<EnvelopeViolation> violation;
  double wall_time = 0.0;  // s

  [[nodiscard]] bool violated() const noexcept { return violation.has_value(); }
};

/// Classical fixed-step RK4 from 0 to T. Never clamps: a violation at any
/// stage stops the run and is reported in the outcome.
[[nodiscard]] RunOutcome simulate(const ValidatedScenario& vs);

/// As simulate(), but rethrows the EnvelopeViolation.
[[nodiscard]] Trajectory integrate(const ValidatedScenario& vs);

/// Worst strict-containment slack over all samples: min over samples and
/// vehicles of min(e + lower rho, upper rho - e). Positive means contained.
[[nodiscard]] double position_containment_slack(const Trajectory& traj);

/// max |xi_v| over all samples (0 when no velocity funnel is used).
[[nodiscard]] double max_abs_velocity_xi(const Trajectory& traj);

/// min and max inter-vehicle gap p_{i-1} - p_i over all samples.
[[nodiscard]] std::pair<double, double> gap_range(const Trajectory& traj);

[[nodiscard]] double max_abs_control(const Trajectory& traj);

/// CSV: t,p0,p_1..p_N,v_1..v_N,ep_1..ep_N,u_1..u_N,rho_p_1..rho_p_N with 9 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace platoon
