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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace platoon {

/// Longitudinal parameters of one follower: m v' = -c1 v - c2 |v| v + u + w.
struct VehicleParams {
  double mass = 1000.0;           // kg
  double drag_linear = 50.0;      // N s/m
  double drag_quadratic = 25.0;   // N s^2/m^2

  void validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw std::invalid_argument("vehicle.mass must be positive and finite");
    }
    if (drag_linear < 0.0 || drag_quadratic < 0.0) {
      throw std::invalid_argument("vehicle drag coefficients cannot be negative");
    }
  }

  friend bool operator==(const VehicleParams&, const VehicleParams&) = default;
};

/// Sinusoidal external force A sin(omega t + phi).
struct Disturbance {
  double amplitude = 0.0;          // N
  double angular_frequency = 0.0;  // rad/s
  double phase = 0.0;              // rad

  void validate() const {
    if (amplitude < 0.0) {
      throw std::invalid_argument("disturbance.amplitude cannot be negative");
    }
  }

  friend bool operator==(const Disturbance&, const Disturbance&) = default;
};

[[nodiscard]] inline double drag_force(const VehicleParams& params, double v) noexcept {
  return -params.drag_linear * v - params.drag_quadratic * std::abs(v) * v;
}

[[nodiscard]] inline double disturbance_force(const Disturbance& d, double t) noexcept {
  return d.amplitude * std::sin(d.angular_frequency * t + d.phase);
}

[[nodiscard]] inline double vehicle_acceleration(const VehicleParams& params, double v, double u,
                                                 double w) noexcept {
  return (drag_force(params, v) + u + w) / params.mass;
}

enum class SegmentKind { Constant, Polynomial, Cosine };

[[nodiscard]] std::string to_string(SegmentKind kind);
[[nodiscard]] SegmentKind segment_kind_from_string(const std::string& name);

/// One piece of the leader velocity law on [t_start, t_end].
///
///   Constant:   v = c0
///   Polynomial: v = c0 + c1 t + c2 t^2 + ...   (absolute time, ascending powers)
///   Cosine:     v = c0 + c1 cos(c2 (t - c3))
struct LeaderSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  SegmentKind kind = SegmentKind::Constant;
  std::vector<double> coefficients;

  [[nodiscard]] double velocity(double t) const;

  friend bool operator==(const LeaderSegment&, const LeaderSegment&) = default;
};

class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Piecewise leader velocity profile covering [0, T].
class LeaderProfile {
 public:
  static constexpr double kContinuityTolerance = 1e-9;

  LeaderProfile() = default;

  /// Throws std::invalid_argument when segments are not contiguous, do not
  /// start at 0, or the velocity jumps at a junction.
  explicit LeaderProfile(std::vector<LeaderSegment> segments);

  /// Throws OutOfRangeError outside [0, horizon()].
  [[nodiscard]] double velocity(double t) const;

  [[nodiscard]] double horizon() const noexcept {
    return segments_.empty() ? 0.0 : segments_.back().t_end;
  }
  [[nodiscard]] const std::vector<LeaderSegment>& segments() const noexcept { return segments_; }

  /// Largest |v(t_j^-) - v(t_j^+)| over all junctions.
  [[nodiscard]] double max_junction_jump() const;

  [[nodiscard]] static LeaderProfile constant(double velocity, double horizon);

  friend bool operator==(const LeaderProfile&, const LeaderProfile&) = default;

 private:
  std::vector<LeaderSegment> segments_;
};

/// The 120 s accelerate/cruise/decelerate/cruise/oscillate profile used by
/// the generic evaluation scenarios.
[[nodiscard]] LeaderProfile reference_leader_profile();

/// d p0/dt: the leader position is carried as an ODE state component.
[[nodiscard]] inline double leader_state_derivative(const LeaderProfile& profile, double t) {
  return profile.velocity(t);
}

}  // namespace platoon
