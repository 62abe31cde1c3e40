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

#include "platoon/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace platoon {

const char* to_string(ControlMode mode) { return mode == ControlMode::Dynamic ? "dynamic" : "kinematic"; }

ControlMode control_mode_from_string(const std::string& name) {
  if (name == "dynamic") return ControlMode::Dynamic;
  if (name == "kinematic") return ControlMode::Kinematic;
  throw std::invalid_argument("unknown mode '" + name + "' (expected dynamic or kinematic)");
}

PerformanceFunction PositionEnvelopeSpec::build(const EnvelopeMargins& margins) const {
  if (steady_bound) {
    if (!(*steady_bound > 0.0)) throw std::invalid_argument("position envelope: steady_bound must be > 0");
    return position_envelope(margins, *steady_bound, decay);
  }
  if (rho_inf) return PerformanceFunction(1.0, *rho_inf, decay);
  throw std::invalid_argument("position envelope: one of steady_bound or rho_inf is required");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string fmt_num(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

// Kinematic part shared by the derivative and the recorder. Fills the
// per-vehicle position error, normalized error, funnel value and v_d.
struct KinematicPass {
  VectorX<> e, xi, rho, feedback, vd;
};

void kinematic_pass(const ValidatedScenario& vs, double p0, const double* p, double t, KinematicPass& out) {
  const Scenario& s = vs.scenario;
  const auto n = static_cast<Eigen::Index>(s.size());
  out.e.resize(n);
  out.xi.resize(n);
  out.rho.resize(n);
  out.feedback.resize(n);
  out.vd.resize(n);
  const bool ppc = vs.uses_envelopes();

  double ahead = p0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.e(i) = ahead - p[i] - s.formation.desired_gaps[k];
    ahead = p[i];
    out.rho(i) = perf_eval(vs.position_envelopes[k], t);
    out.xi(i) = normalize(out.e(i), out.rho(i));
    if (!ppc) continue;
    try {
      out.feedback(i) = position_feedback(out.xi(i), out.rho(i), vs.margins[k]);
    } catch (const EnvelopeViolation& v) {
      throw EnvelopeViolation(v, t, static_cast<int>(i) + 1, EnvelopeKind::Position);
    }
  }
  if (!ppc) {
    out.feedback.setZero();
    out.vd.setZero();
    return;
  }
  const double kp = s.gains.kp;
  const bool bd = s.controller.architecture == ArchitectureKind::Bidirectional;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.vd(i) = bd && i + 1 < n ? reference_velocity_bd(kp, out.feedback(i), out.feedback(i + 1))
                                : reference_velocity_pf(kp, out.feedback(i));
  }
}

double ppc_force(const ValidatedScenario& vs, Eigen::Index i, double velocity_error, double t, double* xi_out,
                 double* rho_out) {
  const auto k = static_cast<std::size_t>(i);
  const double rho = perf_eval(vs.velocity_envelopes[k], t);
  const double xi = normalize(velocity_error, rho);
  if (xi_out) *xi_out = xi;
  if (rho_out) *rho_out = rho;
  try {
    return control_input(vs.scenario.gains.kv, xi, rho);
  } catch (const EnvelopeViolation& v) {
    throw EnvelopeViolation(v, t, static_cast<int>(i) + 1, EnvelopeKind::Velocity);
  }
}

PlatoonState unpack(const ValidatedScenario& vs, const StateVector& x, double t) {
  const auto n = static_cast<Eigen::Index>(vs.size());
  return PlatoonState{x(0), vs.scenario.leader.velocity(t), x.segment(1, n), x.segment(1 + n, n)};
}

}  // namespace

ValidatedScenario validate_scenario(const Scenario& s) {
  const std::size_t n = s.size();
  require(n >= 1, "scenario needs at least one follower vehicle");
  require(s.disturbances.size() == n, "scenario: expected " + std::to_string(n) + " disturbances, got " +
                                          std::to_string(s.disturbances.size()));
  require(s.initial_positions.size() == n, "scenario: expected " + std::to_string(n) +
                                                " initial positions, got " + std::to_string(s.initial_positions.size()));
  require(s.initial_velocities.size() == n, "scenario: expected " + std::to_string(n) +
                                                 " initial velocities, got " +
                                                 std::to_string(s.initial_velocities.size()));
  require(s.formation.size() == n, "scenario: formation has " + std::to_string(s.formation.size()) +
                                       " gaps for " + std::to_string(n) + " vehicles");
  for (const auto& v : s.vehicles) v.validate();
  for (const auto& d : s.disturbances) d.validate();
  s.gains.validate();
  s.velocity_envelope.validate();
  require(s.position_envelope.decay > 0.0, "position envelope: decay must be > 0");
  require(s.dt > 0.0 && std::isfinite(s.dt), "dt must be > 0");
  require(s.horizon > 0.0 && std::isfinite(s.horizon), "T must be > 0");
  require(s.dt <= s.horizon, "dt must not exceed T");
  require(s.record_stride >= 1, "record_stride must be >= 1");
  require(s.transient_time > 0.0 && s.transient_time < s.horizon, "transient time t_s must lie in (0, T)");
  require(!s.leader.segments().empty(), "leader profile is empty");
  require(s.leader.horizon() >= s.horizon, "leader profile ends at " + fmt_num(s.leader.horizon()) +
                                               " s, before T = " + fmt_num(s.horizon) + " s");
  require(!(s.mode == ControlMode::Kinematic && s.controller.controller == ControllerKind::BaselineLinear),
          "baseline-linear controllers are force laws and need mode = dynamic");

  s.formation.validate();

  double ahead = s.initial_leader_position;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = ahead - s.initial_positions[i];
    if (!(s.formation.collision_gap < gap && gap < s.formation.connectivity_gap)) {
      throw FeasibilityError("initial gap between vehicle " + std::to_string(i) + " and vehicle " +
                             std::to_string(i + 1) + " is " + fmt_num(gap) +
                             " m; it must lie strictly between the collision gap " +
                             fmt_num(s.formation.collision_gap) + " m and the connectivity gap " +
                             fmt_num(s.formation.connectivity_gap) + " m");
    }
    ahead = s.initial_positions[i];
  }

  ValidatedScenario vs;
  vs.scenario = s;
  vs.margins.reserve(n);
  vs.position_envelopes.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    vs.margins.push_back(margins_from_formation(s.formation, i));
    vs.position_envelopes.push_back(s.position_envelope.build(vs.margins.back()));
  }

  vs.initial_velocity_errors = VectorX<>::Zero(static_cast<Eigen::Index>(n));
  if (vs.uses_envelopes()) {
    KinematicPass pass;
    try {
      kinematic_pass(vs, s.initial_leader_position, s.initial_positions.data(), 0.0, pass);
    } catch (const EnvelopeViolation& v) {
      throw FeasibilityError(std::string("initial state outside the position funnel: ") + v.what());
    }
    if (s.mode == ControlMode::Dynamic) {
      for (std::size_t i = 0; i < n; ++i) {
        const double ev0 = s.initial_velocities[i] - pass.vd(static_cast<Eigen::Index>(i));
        vs.initial_velocity_errors(static_cast<Eigen::Index>(i)) = ev0;
        vs.velocity_envelopes.push_back(s.velocity_envelope.build(ev0));
      }
    }
  }
  return vs;
}

StateVector initial_state(const ValidatedScenario& vs) {
  const Scenario& s = vs.scenario;
  const auto n = static_cast<Eigen::Index>(s.size());
  const Eigen::Index dim = s.mode == ControlMode::Dynamic ? 1 + 2 * n : 1 + n;
  StateVector x(dim);
  x(0) = s.initial_leader_position;
  for (Eigen::Index i = 0; i < n; ++i) x(1 + i) = s.initial_positions[static_cast<std::size_t>(i)];
  if (s.mode == ControlMode::Dynamic) {
    for (Eigen::Index i = 0; i < n; ++i) x(1 + n + i) = s.initial_velocities[static_cast<std::size_t>(i)];
  }
  return x;
}

StateVector closed_loop_derivative(const ValidatedScenario& vs, const StateVector& x, double t) {
  const Scenario& s = vs.scenario;
  const auto n = static_cast<Eigen::Index>(s.size());
  StateVector dx(x.size());
  dx(0) = leader_state_derivative(s.leader, t);

  if (s.controller.controller == ControllerKind::BaselineLinear) {
    const VectorX<> u = baseline_linear_controller(s.controller.architecture, unpack(vs, x, t), s.formation,
                                                   s.baseline_gains, s.vehicles);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double v = x(1 + n + i);
      dx(1 + i) = v;
      dx(1 + n + i) = vehicle_acceleration(s.vehicles[k], v, u(i), disturbance_force(s.disturbances[k], t));
    }
    return dx;
  }

  thread_local KinematicPass pass;
  kinematic_pass(vs, x(0), x.data() + 1, t, pass);

  if (s.mode == ControlMode::Kinematic) {
    dx.segment(1, n) = pass.vd;
    return dx;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double v = x(1 + n + i);
    const double u = ppc_force(vs, i, v - pass.vd(i), t, nullptr, nullptr);
    dx(1 + i) = v;
    dx(1 + n + i) = vehicle_acceleration(s.vehicles[k], v, u, disturbance_force(s.disturbances[k], t));
  }
  return dx;
}

ClosedLoopSignals evaluate_signals(const ValidatedScenario& vs, const StateVector& x, double t) {
  const Scenario& s = vs.scenario;
  const auto n = static_cast<Eigen::Index>(s.size());
  ClosedLoopSignals out;
  out.leader_velocity = s.leader.velocity(t);

  KinematicPass pass;
  kinematic_pass(vs, x(0), x.data() + 1, t, pass);
  out.position_error = pass.e;
  out.xi_p = pass.xi;
  out.rho_p = pass.rho;
  out.reference_velocity = pass.vd;
  out.velocity_error = VectorX<>::Zero(n);
  out.xi_v = VectorX<>::Zero(n);
  out.rho_v = VectorX<>::Zero(n);

  if (s.mode == ControlMode::Kinematic) {
    out.velocity = pass.vd;
    out.control = pass.vd;
    return out;
  }
  out.velocity = x.segment(1 + n, n);
  if (s.controller.controller == ControllerKind::BaselineLinear) {
    out.control = baseline_linear_controller(s.controller.architecture, unpack(vs, x, t), s.formation,
                                             s.baseline_gains, s.vehicles);
    return out;
  }
  out.control.resize(n);
  out.velocity_error = out.velocity - pass.vd;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.control(i) = ppc_force(vs, i, out.velocity_error(i), t, &out.xi_v(i), &out.rho_v(i));
  }
  return out;
}

namespace {

class Recorder {
 public:
  Recorder(const ValidatedScenario& vs, std::size_t expected) : vs_(vs) {
    const auto n = static_cast<Eigen::Index>(vs.size());
    const auto rows = static_cast<Eigen::Index>(expected);
    for (auto* table : tables()) table->resize(rows, n);
    traj_.time.reserve(expected);
    traj_.leader_position.reserve(expected);
    traj_.leader_velocity.reserve(expected);
    traj_.margins = vs.margins;
    traj_.desired_gaps = vs.scenario.formation.desired_gaps;
    traj_.collision_gap = vs.scenario.formation.collision_gap;
    traj_.connectivity_gap = vs.scenario.formation.connectivity_gap;
  }

  void record(const StateVector& x, double t) {
    const ClosedLoopSignals sig = evaluate_signals(vs_, x, t);
    const auto n = static_cast<Eigen::Index>(vs_.size());
    const auto row = static_cast<Eigen::Index>(traj_.time.size());
    if (row >= traj_.position.rows()) {
      for (auto* table : tables()) table->conservativeResize(2 * row + 1, n);
    }
    traj_.time.push_back(t);
    traj_.leader_position.push_back(x(0));
    traj_.leader_velocity.push_back(sig.leader_velocity);
    traj_.position.row(row) = x.segment(1, n).transpose();
    traj_.velocity.row(row) = sig.velocity.transpose();
    traj_.position_error.row(row) = sig.position_error.transpose();
    traj_.leader_error.row(row) =
        leader_relative_errors(x.segment(1, n), x(0), vs_.scenario.formation).transpose();
    traj_.xi_p.row(row) = sig.xi_p.transpose();
    traj_.reference_velocity.row(row) = sig.reference_velocity.transpose();
    traj_.velocity_error.row(row) = sig.velocity_error.transpose();
    traj_.xi_v.row(row) = sig.xi_v.transpose();
    traj_.control.row(row) = sig.control.transpose();
    traj_.rho_p.row(row) = sig.rho_p.transpose();
    traj_.rho_v.row(row) = sig.rho_v.transpose();
  }

  Trajectory finish() {
    const auto rows = static_cast<Eigen::Index>(traj_.time.size());
    const auto n = static_cast<Eigen::Index>(vs_.size());
    for (auto* table : tables()) table->conservativeResize(rows, n);
    return std::move(traj_);
  }

 private:
  std::array<Trajectory::Table*, 11> tables() {
    return {&traj_.position,    &traj_.velocity,       &traj_.position_error,
            &traj_.leader_error, &traj_.xi_p,          &traj_.reference_velocity,
            &traj_.velocity_error, &traj_.xi_v,        &traj_.control,
            &traj_.rho_p,       &traj_.rho_v};
  }

  const ValidatedScenario& vs_;
  Trajectory traj_;
};

}  // namespace

RunOutcome simulate(const ValidatedScenario& vs) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario& s = vs.scenario;
  const double horizon = s.horizon;
  const double dt = s.dt;
  auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  steps = std::max<std::size_t>(steps, 1);

  Recorder recorder(vs, steps / s.record_stride + 2);
  RunOutcome outcome;
  StateVector x = initial_state(vs);

  try {
    recorder.record(x, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      const double t_next = k + 1 == steps ? horizon : static_cast<double>(k + 1) * dt;
      const double h = t_next - t;
      const StateVector k1 = closed_loop_derivative(vs, x, t);
      const StateVector k2 = closed_loop_derivative(vs, x + 0.5 * h * k1, t + 0.5 * h);
      const StateVector k3 = closed_loop_derivative(vs, x + 0.5 * h * k2, t + 0.5 * h);
      const StateVector k4 = closed_loop_derivative(vs, x + h * k3, t_next);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if ((k + 1) % s.record_stride == 0 || k + 1 == steps) recorder.record(x, t_next);
    }
  } catch (const EnvelopeViolation& v) {
    outcome.violation = v;
  }

  outcome.trajectory = recorder.finish();
  outcome.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

Trajectory integrate(const ValidatedScenario& vs) {
  RunOutcome outcome = simulate(vs);
  if (outcome.violation) throw *outcome.violation;
  return std::move(outcome.trajectory);
}

double position_containment_slack(const Trajectory& traj) {
  double slack = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < traj.position_error.rows(); ++r) {
    for (Eigen::Index i = 0; i < traj.position_error.cols(); ++i) {
      const auto& m = traj.margins[static_cast<std::size_t>(i)];
      const double e = traj.position_error(r, i);
      const double rho = traj.rho_p(r, i);
      slack = std::min({slack, e + m.lower * rho, m.upper * rho - e});
    }
  }
  return slack;
}

double max_abs_velocity_xi(const Trajectory& traj) {
  return traj.xi_v.size() == 0 ? 0.0 : traj.xi_v.cwiseAbs().maxCoeff();
}

std::pair<double, double> gap_range(const Trajectory& traj) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index r = 0; r < traj.position.rows(); ++r) {
    double ahead = traj.leader_position[static_cast<std::size_t>(r)];
    for (Eigen::Index i = 0; i < traj.position.cols(); ++i) {
      const double gap = ahead - traj.position(r, i);
      lo = std::min(lo, gap);
      hi = std::max(hi, gap);
      ahead = traj.position(r, i);
    }
  }
  return {lo, hi};
}

double max_abs_control(const Trajectory& traj) {
  return traj.control.size() == 0 ? 0.0 : traj.control.cwiseAbs().maxCoeff();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto n = static_cast<Eigen::Index>(traj.vehicles());
  out << "t,p0";
  for (const char* prefix : {"p_", "v_", "ep_", "u_", "rho_p_"}) {
    for (Eigen::Index i = 1; i <= n; ++i) out << ',' << prefix << i;
  }
  out << '\n';
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::setprecision(9);
  for (std::size_t r = 0; r < traj.samples(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    out << traj.time[r] << ',' << traj.leader_position[r];
    for (const auto* table : {&traj.position, &traj.velocity, &traj.position_error, &traj.control, &traj.rho_p}) {
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << (*table)(row, i);
    }
    out << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace platoon
