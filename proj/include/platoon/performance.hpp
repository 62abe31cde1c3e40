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
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "platoon/errors.hpp"

namespace platoon {

/// rho(t) = (rho0 - rho_inf) exp(-decay t) + rho_inf.
struct PerformanceFunction {
  double rho0 = 1.0;
  double rho_inf = 0.1;
  double decay = 0.1;  // 1/s

  PerformanceFunction() = default;
  PerformanceFunction(double rho0_, double rho_inf_, double decay_)
      : rho0(rho0_), rho_inf(rho_inf_), decay(decay_) {
    validate();
  }

  void validate() const {
    if (!(rho_inf > 0.0)) throw std::invalid_argument("performance function: rho_inf must be > 0");
    if (!(rho0 >= rho_inf)) throw std::invalid_argument("performance function: rho0 must be >= rho_inf");
    if (!(decay > 0.0)) throw std::invalid_argument("performance function: decay must be > 0");
  }

  friend bool operator==(const PerformanceFunction&, const PerformanceFunction&) = default;
};

/// Asymmetric funnel half-widths: the normalized error must stay in (-lower, upper).
struct EnvelopeMargins {
  double lower = 1.0;
  double upper = 1.0;

  [[nodiscard]] double widest() const noexcept { return lower > upper ? lower : upper; }

  friend bool operator==(const EnvelopeMargins&, const EnvelopeMargins&) = default;
};

/// The velocity funnels use the unit interval.
inline constexpr EnvelopeMargins kUnitMargins{1.0, 1.0};

/// Desired inter-vehicle gaps and the collision / connectivity distances.
struct FormationSpec {
  std::vector<double> desired_gaps;  // m, gap i is between vehicle i-1 and i (i = 1..N)
  double collision_gap = 0.2;        // m
  double connectivity_gap = 7.8;     // m

  [[nodiscard]] std::size_t size() const noexcept { return desired_gaps.size(); }

  /// Cumulative offset of vehicle i (1-based) behind the leader.
  [[nodiscard]] double offset_from_leader(std::size_t i) const;

  /// Throws FeasibilityError unless collision_gap < gap_i < connectivity_gap for all i.
  void validate() const;

  [[nodiscard]] static FormationSpec uniform(std::size_t n, double gap, double collision,
                                             double connectivity) {
    return FormationSpec{std::vector<double>(n, gap), collision, connectivity};
  }

  friend bool operator==(const FormationSpec&, const FormationSpec&) = default;
};

/// (gap_i - collision_gap, connectivity_gap - gap_i) for 1-based vehicle i.
[[nodiscard]] EnvelopeMargins margins_from_formation(const FormationSpec& spec, std::size_t i);

template <typename Scalar>
[[nodiscard]] Scalar perf_eval(const PerformanceFunction& rho, Scalar t) {
  using std::exp;
  return (Scalar(rho.rho0) - Scalar(rho.rho_inf)) * exp(-Scalar(rho.decay) * t) + Scalar(rho.rho_inf);
}

template <typename Scalar>
[[nodiscard]] Scalar perf_deriv(const PerformanceFunction& rho, Scalar t) {
  using std::exp;
  return -Scalar(rho.decay) * (Scalar(rho.rho0) - Scalar(rho.rho_inf)) * exp(-Scalar(rho.decay) * t);
}

template <typename Scalar>
[[nodiscard]] constexpr Scalar normalize(Scalar error, Scalar rho_value) {
  return error / rho_value;
}

enum class Containment { Inside, OnBoundary, Outside };

template <typename Scalar>
[[nodiscard]] Containment classify(Scalar xi, const EnvelopeMargins& m) {
  if (xi > -Scalar(m.lower) && xi < Scalar(m.upper)) return Containment::Inside;
  if (xi == -Scalar(m.lower) || xi == Scalar(m.upper)) return Containment::OnBoundary;
  return Containment::Outside;
}

template <typename Scalar>
void require_inside(Scalar xi, const EnvelopeMargins& m) {
  // Negated form so NaN is rejected too.
  if (!(xi > -Scalar(m.lower) && xi < Scalar(m.upper))) {
    throw EnvelopeViolation(static_cast<double>(xi), m.lower, m.upper);
  }
}

/// ln((1 + xi/lower) / (1 - xi/upper)); maps (-lower, upper) onto the real line.
template <typename Scalar>
[[nodiscard]] Scalar barrier_transform(Scalar xi, const EnvelopeMargins& m) {
  using std::log1p;
  require_inside(xi, m);
  return log1p(xi / Scalar(m.lower)) - log1p(-xi / Scalar(m.upper));
}

/// d barrier_transform / d xi = (1/lower + 1/upper) / ((1 + xi/lower)(1 - xi/upper)).
template <typename Scalar>
[[nodiscard]] Scalar barrier_gain(Scalar xi, const EnvelopeMargins& m) {
  require_inside(xi, m);
  const Scalar lo = Scalar(m.lower);
  const Scalar up = Scalar(m.upper);
  return (Scalar(1) / lo + Scalar(1) / up) / ((Scalar(1) + xi / lo) * (Scalar(1) - xi / up));
}

/// Position funnel in the normalized form rho0 = 1, rho_inf = steady_bound / max(lower, upper),
/// so that the absolute error bound settles at steady_bound on the wider side.
[[nodiscard]] PerformanceFunction position_envelope(const EnvelopeMargins& m, double steady_bound,
                                                    double decay);

/// Velocity funnel scale |e_v(0)| exp(-decay t) + floor.
struct VelocityEnvelopeSpec {
  double scale = 2.0;
  double floor = 0.1;  // m/s
  double decay = 0.1;  // 1/s

  /// rho(0) = scale |e_v(0)| + floor, which exceeds |e_v(0)| whenever scale >= 1.
  [[nodiscard]] PerformanceFunction build(double initial_velocity_error) const;

  void validate() const;

  friend bool operator==(const VelocityEnvelopeSpec&, const VelocityEnvelopeSpec&) = default;
};

}  // namespace platoon
