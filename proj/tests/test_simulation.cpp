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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "platoon/simulation.hpp"
#include "test_support.hpp"

namespace platoon {
namespace {

using testing::scenario_from;
using testing::small_scenario;

TEST(Validate, ReferencePresetsAreValid) {
  for (const auto& name : preset_names()) {
    EXPECT_NO_THROW((void)validate_scenario(scenario_from(name))) << name;
  }
}

TEST(Validate, InitialGapAtCollisionDistanceIsNamed) {
  Scenario s = small_scenario(3);
  s.initial_positions[0] = s.initial_leader_position - s.formation.collision_gap;
  try {
    (void)validate_scenario(s);
    FAIL() << "expected FeasibilityError";
  } catch (const FeasibilityError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("vehicle 0 and vehicle 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("collision gap"), std::string::npos) << msg;
  }
}

TEST(Validate, GapBeyondConnectivityRejected) {
  Scenario s = small_scenario(2);
  s.initial_positions[0] = s.initial_leader_position - 7.9;
  EXPECT_THROW((void)validate_scenario(s), FeasibilityError);
}

TEST(Validate, IntegrationSettings) {
  Scenario s = small_scenario(2);
  s.dt = 0.0;
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
  s.dt = 3.0;
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
  s = small_scenario(2);
  s.record_stride = 0;
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
  s = small_scenario(2);
  s.transient_time = s.horizon;
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
}

TEST(Validate, SizesMustAgree) {
  Scenario s = small_scenario(3);
  s.disturbances.pop_back();
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
  s = small_scenario(3);
  s.initial_velocities.push_back(0.0);
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
}

TEST(Validate, LeaderMustCoverHorizon) {
  Scenario s = small_scenario(2);
  s.leader = LeaderProfile::constant(0.0, 1.0);
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
}

TEST(Validate, BaselineNeedsDynamicMode) {
  Scenario s = small_scenario(2);
  s.mode = ControlMode::Kinematic;
  s.controller = ControllerChoice::parse("baseline-linear-pf");
  EXPECT_THROW((void)validate_scenario(s), std::invalid_argument);
}

TEST(Validate, VelocityFunnelContainsInitialError) {
  const ValidatedScenario vs = validate_scenario(scenario_from("paper-pf", {"initial.offset_fraction=0.5"}));
  ASSERT_EQ(vs.velocity_envelopes.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double ev0 = vs.initial_velocity_errors(static_cast<Eigen::Index>(i));
    EXPECT_LT(std::abs(ev0), vs.velocity_envelopes[i].rho0);
  }
}

TEST(Derivative, EquilibriumHasZeroErrorRate) {
  for (const char* arch : {"pf", "bd"}) {
    const ValidatedScenario vs = validate_scenario(small_scenario(4, arch, 5.0));
    const StateVector x = initial_state(vs);
    const StateVector dx = closed_loop_derivative(vs, x, 0.0);
    const auto n = static_cast<Eigen::Index>(vs.size());
    VectorX<> positions_rate(n + 1);
    positions_rate << dx(0), dx.segment(1, n);
    for (Eigen::Index i = 0; i < n; ++i) EXPECT_EQ(positions_rate(i) - positions_rate(i + 1), 0.0) << arch;
  }
}

TEST(Derivative, KinematicModeIgnoresMass) {
  Scenario s = scenario_from("hallway-kinematic");
  const ValidatedScenario a = validate_scenario(s);
  for (auto& v : s.vehicles) v.mass *= 7.3;
  const ValidatedScenario b = validate_scenario(s);
  const StateVector x = initial_state(a);
  for (double t : {0.0, 0.01, 0.05}) EXPECT_EQ(closed_loop_derivative(a, x, t), closed_loop_derivative(b, x, t));
}

TEST(Derivative, SingleVehicleHandComposition) {
  Scenario s = small_scenario(1, "pf", 2.0, 10.0);
  s.vehicles[0] = VehicleParams{1200, 40, 20};
  s.disturbances[0] = Disturbance{500, 3.0, 0.25};
  s.initial_positions = {-3.0};
  s.initial_velocities = {1.5};
  s.gains = ControlGains{0.5, 80};
  const ValidatedScenario vs = validate_scenario(s);

  const double t = 0.7;
  StateVector x(3);
  x << 1.1, -2.6, 1.9;

  // Hand evaluation of the two-level law for one follower.
  const double m_lo = 3.8, m_hi = 3.8;
  const double rho_p = (1.0 - 0.05 / 3.8) * std::exp(-0.1 * t) + 0.05 / 3.8;
  const double e = 1.1 - (-2.6) - 4.0;
  const double xi = e / rho_p;
  const double r = (1 / m_lo + 1 / m_hi) / ((1 + xi / m_lo) * (1 - xi / m_hi));
  const double eps = std::log((1 + xi / m_lo) / (1 - xi / m_hi));
  const double vd = 0.5 * r * eps / rho_p;

  const double q = -1.0 / 3.8;  // e(0) = -1, rho(0) = 1
  const double vd0 = 0.5 * (2.0 / 3.8) / ((1 + q) * (1 - q)) * std::log((1 + q) / (1 - q));
  const double rho_v = (2.0 * std::abs(1.5 - vd0) + 0.1 - 0.1) * std::exp(-0.1 * t) + 0.1;
  const double xi_v = (1.9 - vd) / rho_v;
  const double u = -80.0 * (2.0 / ((1 + xi_v) * (1 - xi_v))) * std::log((1 + xi_v) / (1 - xi_v)) / rho_v;
  const double w = 500 * std::sin(3.0 * t + 0.25);
  const double accel = (-40 * 1.9 - 20 * 1.9 * 1.9 + u + w) / 1200;

  const StateVector dx = closed_loop_derivative(vs, x, t);
  EXPECT_NEAR(vs.initial_velocity_errors(0), 1.5 - vd0, 1e-14);
  EXPECT_DOUBLE_EQ(dx(0), 2.0);
  EXPECT_DOUBLE_EQ(dx(1), 1.9);
  EXPECT_NEAR(dx(2), accel, 1e-12 * std::abs(accel));
}

TEST(Derivative, BaselineUsesForceLaw) {
  Scenario s = small_scenario(2);
  s.controller = ControllerChoice::parse("baseline-linear-bd");
  const ValidatedScenario vs = validate_scenario(s);
  EXPECT_TRUE(vs.velocity_envelopes.empty());
  EXPECT_EQ(closed_loop_derivative(vs, initial_state(vs), 0.0), StateVector::Zero(5));
}

TEST(Integrate, EquilibriumStaysExact) {
  Scenario s = scenario_from("equilibrium", {"T=10", "t_s=5"});
  const Trajectory traj = integrate(validate_scenario(s));
  EXPECT_LT(traj.position_error.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_DOUBLE_EQ(traj.time.back(), 10.0);
}

TEST(Integrate, GridAndRecording) {
  Scenario s = small_scenario(2, "pf", 0.0, 1.0);
  s.dt = 0.03;  // does not divide T
  s.record_stride = 4;
  const Trajectory traj = integrate(validate_scenario(s));
  EXPECT_DOUBLE_EQ(traj.time.front(), 0.0);
  EXPECT_DOUBLE_EQ(traj.time.back(), 1.0);
  EXPECT_NEAR(traj.time[1], 0.12, 1e-15);
  for (std::size_t r = 1; r < traj.samples(); ++r) EXPECT_GT(traj.time[r], traj.time[r - 1]);
  EXPECT_EQ(static_cast<std::size_t>(traj.position.rows()), traj.samples());
  EXPECT_EQ(traj.vehicles(), 2u);
}

TEST(Integrate, Deterministic) {
  const ValidatedScenario vs = validate_scenario(scenario_from("paper-pf", {"T=3", "t_s=1"}));
  const Trajectory a = integrate(vs);
  const Trajectory b = integrate(vs);
  EXPECT_EQ(a.position, b.position);
  EXPECT_EQ(a.control, b.control);
}

TEST(Integrate, ViolationIsReportedNotClamped) {
  // A coarse step on a stiff funnel must abort with a located diagnostic.
  Scenario s = scenario_from("paper-bd", {"T=60", "t_s=10", "dt=0.01"});
  const RunOutcome out = simulate(validate_scenario(s));
  ASSERT_TRUE(out.violated());
  EXPECT_GT(out.violation->time, 0.0);
  EXPECT_GE(out.violation->vehicle, 1);
  EXPECT_LE(out.violation->vehicle, 10);
  EXPECT_NE(std::string(out.violation->what()).find("vehicle"), std::string::npos);
  EXPECT_LT(out.trajectory.time.back(), 60.0);
  EXPECT_THROW((void)integrate(validate_scenario(s)), EnvelopeViolation);
}

TEST(Integrate, HalvingStepBarelyMovesFinalPositions) {
  Scenario s = scenario_from("paper-pf", {"record_stride=100000"});
  const Trajectory a = integrate(validate_scenario(s));
  s.dt /= 2;
  const Trajectory b = integrate(validate_scenario(s));
  const auto last_a = static_cast<Eigen::Index>(a.samples() - 1);
  const auto last_b = static_cast<Eigen::Index>(b.samples() - 1);
  EXPECT_DOUBLE_EQ(a.time.back(), b.time.back());
  EXPECT_LT((a.position.row(last_a) - b.position.row(last_b)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Integrate, KinematicHallwayStaysInsideGaps) {
  const Trajectory traj = integrate(validate_scenario(scenario_from("hallway-kinematic")));
  const auto [lo, hi] = gap_range(traj);
  EXPECT_GT(lo, 0.05);
  EXPECT_LT(hi, 0.65);
  EXPECT_GT(position_containment_slack(traj), 0.0);
  EXPECT_LE(traj.control.cwiseAbs().maxCoeff(), 0.5);
}

TEST(TrajectoryCsv, HeaderAndShape) {
  Scenario s = small_scenario(2, "pf", 0.0, 0.05);
  const Trajectory traj = integrate(validate_scenario(s));
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,p0,p_1,p_2,v_1,v_2,ep_1,ep_2,u_1,u_2,rho_p_1,rho_p_2");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
  }
  EXPECT_EQ(rows, traj.samples());
}

TEST(ModeNames, RoundTrip) {
  EXPECT_EQ(control_mode_from_string(to_string(ControlMode::Kinematic)), ControlMode::Kinematic);
  EXPECT_THROW((void)control_mode_from_string("hover"), std::invalid_argument);
}

}  // namespace
}  // namespace platoon
