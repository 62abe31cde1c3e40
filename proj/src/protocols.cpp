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

#include "platoon/protocols.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

namespace platoon {

ControllerChoice ControllerChoice::parse(const std::string& name) {
  if (name == "pf") return {ControllerKind::PrescribedPerformance, ArchitectureKind::PredecessorFollowing};
  if (name == "bd") return {ControllerKind::PrescribedPerformance, ArchitectureKind::Bidirectional};
  if (name == "baseline-linear-pf") return {ControllerKind::BaselineLinear, ArchitectureKind::PredecessorFollowing};
  if (name == "baseline-linear-bd") return {ControllerKind::BaselineLinear, ArchitectureKind::Bidirectional};
  throw std::invalid_argument("unknown architecture '" + name +
                              "' (expected pf, bd, baseline-linear-pf or baseline-linear-bd)");
}

std::string ControllerChoice::name() const {
  const std::string arch = architecture == ArchitectureKind::PredecessorFollowing ? "pf" : "bd";
  return controller == ControllerKind::PrescribedPerformance ? arch : "baseline-linear-" + arch;
}

const char* to_string(ArchitectureKind arch) {
  return arch == ArchitectureKind::PredecessorFollowing ? "pf" : "bd";
}

const char* to_string(ControllerKind kind) {
  return kind == ControllerKind::PrescribedPerformance ? "ppc" : "baseline-linear";
}

VectorX<> neighborhood_errors(const Eigen::Ref<const VectorX<>>& positions, double leader_position,
                              const FormationSpec& spec) {
  const Eigen::Index n = positions.size();
  if (static_cast<std::size_t>(n) != spec.size()) {
    throw std::invalid_argument("neighborhood_errors: position count does not match formation");
  }
  VectorX<> e(n);
  double ahead = leader_position;
  for (Eigen::Index i = 0; i < n; ++i) {
    e(i) = ahead - positions(i) - spec.desired_gaps[i];
    ahead = positions(i);
  }
  return e;
}

VectorX<> leader_relative_errors(const Eigen::Ref<const VectorX<>>& positions, double leader_position,
                                 const FormationSpec& spec) {
  const Eigen::Index n = positions.size();
  if (static_cast<std::size_t>(n) != spec.size()) {
    throw std::invalid_argument("leader_relative_errors: position count does not match formation");
  }
  VectorX<> e(n);
  double offset = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    offset += spec.desired_gaps[i];
    e(i) = leader_position - positions(i) - offset;
  }
  return e;
}

VectorX<> reference_velocity(ArchitectureKind arch, const Eigen::Ref<const VectorX<>>& xi_p, double t,
                             double kp, const PositionChannels& channels) {
  const auto n = static_cast<std::size_t>(xi_p.size());
  if (channels.envelopes.size() != n || channels.margins.size() != n) {
    throw std::invalid_argument("reference_velocity: channel count does not match error vector");
  }
  auto feedback = [&](std::size_t i) {
    return position_feedback(xi_p(i), perf_eval(channels.envelopes[i], t), channels.margins[i]);
  };

  VectorX<> vd(xi_p.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double own = feedback(i);
    if (arch == ArchitectureKind::Bidirectional && i + 1 < n) {
      vd(i) = reference_velocity_bd(kp, own, feedback(i + 1));
    } else {
      vd(i) = reference_velocity_pf(kp, own);
    }
  }
  return vd;
}

VectorX<> control_input(const Eigen::Ref<const VectorX<>>& xi_v, double t, double kv,
                        std::span<const PerformanceFunction> velocity_envelopes) {
  if (velocity_envelopes.size() != static_cast<std::size_t>(xi_v.size())) {
    throw std::invalid_argument("control_input: envelope count does not match error vector");
  }
  VectorX<> u(xi_v.size());
  for (Eigen::Index i = 0; i < xi_v.size(); ++i) {
    u(i) = control_input(kv, xi_v(i), perf_eval(velocity_envelopes[i], t));
  }
  return u;
}

VectorX<> mmatrix_certificate(const TopologyMatrix& s) {
  const auto n = static_cast<Eigen::Index>(s.size());
  // S is unit lower triangular; forward substitution gives S^{-1} 1.
  const VectorX<> w = s.dense().triangularView<Eigen::UnitLower>().solve(VectorX<>::Ones(n));
  if ((w.array() <= 0.0).any()) {
    throw std::logic_error("mmatrix_certificate: S^{-1} 1 has a non-positive entry");
  }
  return w.cwiseInverse();
}

double verify_certificate(const TopologyMatrix& s, const Eigen::Ref<const VectorX<>>& p_diag) {
  const MatrixX<> dense = s.dense();
  const MatrixX<> ps = p_diag.asDiagonal() * dense;
  const MatrixX<> q = ps + ps.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixX<>> solver(q, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::logic_error("verify_certificate: eigenvalue computation failed");
  }
  const double lambda_min = solver.eigenvalues().minCoeff();
  if (!(lambda_min > 0.0)) {
    std::ostringstream msg;
    msg << "verify_certificate: P S + S^T P is not positive definite (lambda_min = " << lambda_min << ")";
    throw std::logic_error(msg.str());
  }
  return lambda_min;
}

double sigma_min(const TopologyMatrix& s) {
  // S^T S is tridiagonal: diagonal (2, ..., 2, 1), off-diagonal -1.
  const auto n = static_cast<Eigen::Index>(s.size());
  VectorX<> diag = VectorX<>::Constant(n, 2.0);
  diag(n - 1) = 1.0;
  VectorX<> sub = VectorX<>::Constant(n > 1 ? n - 1 : 0, -1.0);
  Eigen::SelfAdjointEigenSolver<MatrixX<>> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().minCoeff()));
}

VectorX<> baseline_linear_controller(ArchitectureKind arch, const PlatoonState& state, const FormationSpec& spec,
                                     const BaselineGains& gains, std::span<const VehicleParams> vehicles) {
  const Eigen::Index n = state.positions.size();
  if (state.velocities.size() != n || vehicles.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("baseline_linear_controller: inconsistent state sizes");
  }
  const VectorX<> e = neighborhood_errors(state.positions, state.leader_position, spec);
  const double bias = 1.0 + gains.model_bias;

  VectorX<> u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v_ahead = i == 0 ? state.leader_velocity : state.velocities(i - 1);
    const double v = state.velocities(i);
    double accel = gains.ka * e(i) - gains.kb * (v - v_ahead);
    if (arch == ArchitectureKind::Bidirectional && i + 1 < n) {
      accel += -gains.ka * e(i + 1) + gains.kb * (state.velocities(i + 1) - v);
    }
    const VehicleParams& veh = vehicles[static_cast<std::size_t>(i)];
    VehicleParams nominal{bias * veh.mass, bias * veh.drag_linear, bias * veh.drag_quadratic};
    u(i) = nominal.mass * accel - drag_force(nominal, v);
  }
  return u;
}

}  // namespace platoon
