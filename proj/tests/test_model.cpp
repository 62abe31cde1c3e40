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
#include <numbers>

#include "platoon/model.hpp"
#include "platoon/simulation.hpp"
#include "test_support.hpp"

namespace platoon {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(DragForce, ZeroAtRest) { EXPECT_EQ(drag_force(VehicleParams{1000, 50, 25}, 0.0), 0.0); }

TEST(DragForce, HandValues) {
  const VehicleParams p{1000, 50, 25};
  EXPECT_DOUBLE_EQ(drag_force(p, 10.0), -3000.0);
  EXPECT_DOUBLE_EQ(drag_force(p, -10.0), 3000.0);
}

TEST(DragForce, OddAndOpposesMotion) {
  const VehicleParams p{800, 40, 30};
  for (double v = -30.0; v <= 30.0; v += 0.37) {
    EXPECT_DOUBLE_EQ(drag_force(p, v), -drag_force(p, -v));
    if (v != 0.0) EXPECT_LT(drag_force(p, v) * v, 0.0);
  }
}

TEST(Disturbance, HandValues) {
  EXPECT_NEAR(disturbance_force({1000, 2 * kPi, 0}, 0.0), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(disturbance_force({1000, 2 * kPi, kPi / 2}, 0.0), 1000.0);
  EXPECT_NEAR(disturbance_force({1500, 4 * kPi, 0}, 0.125), 1500.0, 1e-9);
}

TEST(Disturbance, BoundedByAmplitude) {
  const Disturbance d{1234, 9.1, 0.3};
  for (double t = 0; t < 20; t += 0.013) EXPECT_LE(std::abs(disturbance_force(d, t)), 1234.0);
}

TEST(VehicleAcceleration, HandValues) {
  EXPECT_EQ(vehicle_acceleration({1000, 50, 25}, 0, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(vehicle_acceleration({1000, 50, 25}, 0, 2000, 0), 2.0);
  EXPECT_DOUBLE_EQ(vehicle_acceleration({500, 50, 25}, 10, 3000, 0), 0.0);
}

TEST(VehicleParams, RejectsBadValues) {
  EXPECT_THROW((VehicleParams{0, 50, 25}.validate()), std::invalid_argument);
  EXPECT_THROW((VehicleParams{-5, 50, 25}.validate()), std::invalid_argument);
  EXPECT_THROW((VehicleParams{1000, -1, 25}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((VehicleParams{1000, 0, 0}.validate()));
}

TEST(LeaderProfile, ReferenceValues) {
  const LeaderProfile leader = reference_leader_profile();
  EXPECT_NEAR(leader.velocity(0.0), 0.0, 1e-12);
  EXPECT_NEAR(leader.velocity(50.0), 25.0, 1e-9);
  EXPECT_NEAR(leader.velocity(75.0), 20.0, 1e-9);
  EXPECT_NEAR(leader.velocity(90.0), 15.0, 1e-12);
  EXPECT_NEAR(leader.velocity(120.0), 17.5 - 2.5 * std::cos(15.0), 1e-12);
  EXPECT_DOUBLE_EQ(leader.horizon(), 120.0);
}

TEST(LeaderProfile, ReferenceIsContinuousAtJunctions) {
  const LeaderProfile leader = reference_leader_profile();
  EXPECT_LT(leader.max_junction_jump(), 1e-9);
  for (double tj : {50.0, 70.0, 80.0, 90.0}) {
    EXPECT_NEAR(leader.velocity(tj - 1e-9), leader.velocity(tj + 1e-9), 1e-6) << "t=" << tj;
  }
}

TEST(LeaderProfile, AccelerationPieceMatchesClosedForm) {
  const LeaderProfile leader = reference_leader_profile();
  for (double t = 0; t <= 50; t += 1.25) {
    EXPECT_NEAR(leader.velocity(t), (75 * t * t - t * t * t) / 2500, 1e-10);
  }
}

TEST(LeaderProfile, OutOfRangeThrows) {
  const LeaderProfile leader = reference_leader_profile();
  EXPECT_THROW((void)leader.velocity(-0.1), OutOfRangeError);
  EXPECT_THROW((void)leader.velocity(120.5), OutOfRangeError);
}

TEST(LeaderProfile, RejectsGapsAndJumps) {
  EXPECT_THROW(LeaderProfile(std::vector<LeaderSegment>{}), std::invalid_argument);
  EXPECT_THROW(LeaderProfile({{1, 2, SegmentKind::Constant, {1}}}), std::invalid_argument);
  EXPECT_THROW(LeaderProfile({{0, 1, SegmentKind::Constant, {1}}, {1.5, 2, SegmentKind::Constant, {1}}}),
               std::invalid_argument);
  EXPECT_THROW(LeaderProfile({{0, 1, SegmentKind::Constant, {1}}, {1, 2, SegmentKind::Constant, {2}}}),
               std::invalid_argument);
  EXPECT_THROW(LeaderProfile({{0, 1, SegmentKind::Cosine, {1}}}), std::invalid_argument);
}

TEST(LeaderProfile, SegmentKindNames) {
  for (auto k : {SegmentKind::Constant, SegmentKind::Polynomial, SegmentKind::Cosine}) {
    EXPECT_EQ(segment_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW((void)segment_kind_from_string("spline"), std::invalid_argument);
}

TEST(LeaderState, DerivativeIsVelocity) {
  const LeaderProfile leader = reference_leader_profile();
  EXPECT_EQ(leader_state_derivative(leader, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(leader_state_derivative(leader, 60.0), 25.0);
}

TEST(LeaderState, ConstantProfileIntegratesExactly) {
  Scenario s = testing::scenario_from("hallway-kinematic");
  const Trajectory traj = integrate(validate_scenario(s));
  for (std::size_t r = 0; r < traj.samples(); ++r) {
    EXPECT_NEAR(traj.leader_position[r], 0.3 * traj.time[r], 1e-12);
  }
}

TEST(LeaderState, IntegratedPositionMatchesAntiderivative) {
  // Followers are irrelevant here; a relaxed kinematic platoon carries p0.
  Scenario s = testing::scenario_from("hallway-kinematic", {"T=50", "t_s=10"});
  s.leader = reference_leader_profile();
  s.formation = FormationSpec::uniform(1, 4.0, 0.2, 1e6);
  s.vehicles.resize(1);
  s.disturbances.resize(1);
  s.initial_positions = {-4.0};
  s.initial_velocities = {0.0};
  s.position_envelope = PositionEnvelopeSpec{0.1, std::nullopt, 0.999};
  const Trajectory traj = integrate(validate_scenario(s));
  const double t = 50.0;
  const double closed_form = (75 * t * t * t / 3 - t * t * t * t / 4) / 2500;
  EXPECT_NEAR(closed_form, 625.0, 1e-9);
  EXPECT_NEAR(traj.leader_position.back(), closed_form, 1e-8);
}

}  // namespace
}  // namespace platoon
