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
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "platoon/model.hpp"
#include "platoon/performance.hpp"

namespace platoon {

template <typename Scalar = double>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class ArchitectureKind { PredecessorFollowing, Bidirectional };

enum class ControllerKind { PrescribedPerformance, BaselineLinear };

/// Parses "pf" | "bd" | "baseline-linear-pf" | "baseline-linear-bd".
struct ControllerChoice {
  ControllerKind controller = ControllerKind::PrescribedPerformance;
  ArchitectureKind architecture = ArchitectureKind::PredecessorFollowing;

  [[nodiscard]] static ControllerChoice parse(const std::string& name);
  [[nodiscard]] std::string name() const;

  friend bool operator==(const ControllerChoice&, const ControllerChoice&) = default;
};

[[nodiscard]] const char* to_string(ArchitectureKind arch);
[[nodiscard]] const char* to_string(ControllerKind kind);

struct ControlGains {
  double kp = 0.1;    // position (kinematic) gain
  double kv = 100.0;  // velocity (dynamic) gain

  void validate() const {
    if (!(kp > 0.0) || !(kv > 0.0)) throw std::invalid_argument("gains: kp and kv must be > 0");
  }

  friend bool operator==(const ControlGains&, const ControlGains&) = default;
};

/// Lower-bidiagonal platoon topology: 1 on the diagonal, -1 below it.
///
/// Maps leader-relative errors to neighborhood errors, e_p = S e_p0.
class TopologyMatrix {
 public:
  explicit TopologyMatrix(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("topology needs at least one follower");
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  template <typename Scalar = double>
  [[nodiscard]] MatrixX<Scalar> dense() const {
    MatrixX<Scalar> s = MatrixX<Scalar>::Identity(n_, n_);
    for (std::size_t i = 1; i < n_; ++i) s(i, i - 1) = Scalar(-1);
    return s;
  }

  template <typename Derived>
  [[nodiscard]] VectorX<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& x) const {
    VectorX<typename Derived::Scalar> y(x.size());
    y(0) = x(0);
    for (Eigen::Index i = 1; i < x.size(); ++i) y(i) = x(i) - x(i - 1);
    return y;
  }

  template <typename Derived>
  [[nodiscard]] VectorX<typename Derived::Scalar> apply_transpose(const Eigen::MatrixBase<Derived>& x) const {
    const Eigen::Index n = x.size();
    VectorX<typename Derived::Scalar> y(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) y(i) = x(i) - x(i + 1);
    y(n - 1) = x(n - 1);
    return y;
  }

 private:
  std::size_t n_;
};

[[nodiscard]] inline TopologyMatrix build_topology(std::size_t n) { return TopologyMatrix(n); }

/// e_i = p_{i-1} - p_i - gap_i, with p_0 the leader.
[[nodiscard]] VectorX<> neighborhood_errors(const Eigen::Ref<const VectorX<>>& positions, double leader_position,
                                            const FormationSpec& spec);

/// e_0i = p_0 - p_i - sum_{j<=i} gap_j.
[[nodiscard]] VectorX<> leader_relative_errors(const Eigen::Ref<const VectorX<>>& positions,
                                               double leader_position, const FormationSpec& spec);

/// Per-vehicle position feedback (1/rho) r(xi) eps(xi); the building block of v_d.
/// Throws EnvelopeViolation if xi is outside (-lower, upper).
template <typename Scalar>
[[nodiscard]] Scalar position_feedback(Scalar xi, Scalar rho_value, const EnvelopeMargins& margins) {
  return barrier_gain(xi, margins) * barrier_transform(xi, margins) / rho_value;
}

/// Predecessor-following reference velocity of one vehicle: reads only its own gap.
template <typename Scalar>
[[nodiscard]] Scalar reference_velocity_pf(Scalar kp, Scalar own_feedback) {
  return kp * own_feedback;
}

/// Bidirectional reference velocity of vehicle i < N: own gap minus the follower's gap.
template <typename Scalar>
[[nodiscard]] Scalar reference_velocity_bd(Scalar kp, Scalar own_feedback, Scalar follower_feedback) {
  return kp * (own_feedback - follower_feedback);
}

/// Inputs of the kinematic law for the whole platoon.
struct PositionChannels {
  std::span<const PerformanceFunction> envelopes;
  std::span<const EnvelopeMargins> margins;
};

/// Reference velocities v_d for all followers. Each entry is computed from
/// the vehicle's permitted neighbours only (own gap; plus the follower's gap for BD).
[[nodiscard]] VectorX<> reference_velocity(ArchitectureKind arch, const Eigen::Ref<const VectorX<>>& xi_p,
                                           double t, double kp, const PositionChannels& channels);

/// u_i = -kv (1/rho_v) r_v(xi_v) eps_v(xi_v), the dynamic-level law with unit margins.
template <typename Scalar>
[[nodiscard]] Scalar control_input(Scalar kv, Scalar xi_v, Scalar rho_v_value) {
  return -kv * position_feedback(xi_v, rho_v_value, kUnitMargins);
}

[[nodiscard]] VectorX<> control_input(const Eigen::Ref<const VectorX<>>& xi_v, double t, double kv,
                                      std::span<const PerformanceFunction> velocity_envelopes);

/// Diagonal of P = diag(S^{-1} 1)^{-1}.
[[nodiscard]] VectorX<> mmatrix_certificate(const TopologyMatrix& s);

/// Smallest eigenvalue of P S + S^T P. Throws std::logic_error when it is not
/// strictly positive, which cannot happen for a valid topology.
[[nodiscard]] double verify_certificate(const TopologyMatrix& s, const Eigen::Ref<const VectorX<>>& p_diag);

/// Smallest singular value of S.
[[nodiscard]] double sigma_min(const TopologyMatrix& s);

/// Conventional spacing PD law with a mismatched nominal model, used as the
/// comparison row in sweeps. model_bias scales the nominal mass and drag.
struct BaselineGains {
  double ka = 1.0;          // 1/s^2
  double kb = 2.0;          // 1/s
  double model_bias = 0.15;

  friend bool operator==(const BaselineGains&, const BaselineGains&) = default;
};

struct PlatoonState {
  double leader_position = 0.0;
  double leader_velocity = 0.0;
  VectorX<> positions;
  VectorX<> velocities;
};

/// u_i = m_hat (ka e_i - kb (v_i - v_{i-1})) - f_hat(v_i) for PF; BD adds
/// the symmetric follower terms m_hat (-ka e_{i+1} + kb (v_{i+1} - v_i)) for i < N.
[[nodiscard]] VectorX<> baseline_linear_controller(ArchitectureKind arch, const PlatoonState& state,
                                                   const FormationSpec& spec, const BaselineGains& gains,
                                                   std::span<const VehicleParams> vehicles);

}  // namespace platoon
