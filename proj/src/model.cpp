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

#include "platoon/model.hpp"

#include <algorithm>
#include <sstream>

namespace platoon {

std::string to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Constant:
      return "constant";
    case SegmentKind::Polynomial:
      return "polynomial";
    case SegmentKind::Cosine:
      return "cosine";
  }
  return "unknown";
}

SegmentKind segment_kind_from_string(const std::string& name) {
  if (name == "constant") return SegmentKind::Constant;
  if (name == "polynomial") return SegmentKind::Polynomial;
  if (name == "cosine") return SegmentKind::Cosine;
  throw std::invalid_argument("unknown leader segment kind '" + name + "'");
}

double LeaderSegment::velocity(double t) const {
  switch (kind) {
    case SegmentKind::Constant:
      return coefficients.at(0);
    case SegmentKind::Polynomial: {
      // Horner, highest power first.
      double v = 0.0;
      for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
        v = v * t + *it;
      }
      return v;
    }
    case SegmentKind::Cosine:
      return coefficients.at(0) + coefficients.at(1) * std::cos(coefficients.at(2) * (t - coefficients.at(3)));
  }
  return 0.0;
}

namespace {

void check_segment(const LeaderSegment& s, std::size_t index) {
  const auto where = "leader segment " + std::to_string(index);
  if (!(s.t_end > s.t_start)) {
    throw std::invalid_argument(where + ": t_end must exceed t_start");
  }
  std::size_t needed = 1;
  if (s.kind == SegmentKind::Cosine) needed = 4;
  if (s.coefficients.size() < needed) {
    throw std::invalid_argument(where + ": " + to_string(s.kind) + " needs at least " +
                                std::to_string(needed) + " coefficients");
  }
}

}  // namespace

LeaderProfile::LeaderProfile(std::vector<LeaderSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) {
    throw std::invalid_argument("leader profile needs at least one segment");
  }
  if (segments_.front().t_start != 0.0) {
    throw std::invalid_argument("leader profile must start at t = 0");
  }
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    check_segment(segments_[k], k);
    if (k > 0 && segments_[k].t_start != segments_[k - 1].t_end) {
      throw std::invalid_argument("leader segments " + std::to_string(k - 1) + " and " +
                                  std::to_string(k) + " are not contiguous");
    }
  }
  if (const double jump = max_junction_jump(); jump >= kContinuityTolerance) {
    std::ostringstream msg;
    msg << "leader velocity is discontinuous (jump " << jump << " m/s)";
    throw std::invalid_argument(msg.str());
  }
}

double LeaderProfile::velocity(double t) const {
  if (segments_.empty() || !(t >= 0.0) || t > horizon()) {
    std::ostringstream msg;
    msg << "leader profile queried at t = " << t << " outside [0, " << horizon() << "]";
    throw OutOfRangeError(msg.str());
  }
  // First segment whose end is >= t; junction points take the left segment.
  const auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                                   [](const LeaderSegment& s, double x) { return s.t_end < x; });
  return it->velocity(t);
}

double LeaderProfile::max_junction_jump() const {
  double jump = 0.0;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    const double tj = segments_[k].t_start;
    jump = std::max(jump, std::abs(segments_[k - 1].velocity(tj) - segments_[k].velocity(tj)));
  }
  return jump;
}

LeaderProfile LeaderProfile::constant(double velocity, double horizon) {
  return LeaderProfile({LeaderSegment{0.0, horizon, SegmentKind::Constant, {velocity}}});
}

LeaderProfile reference_leader_profile() {
  return LeaderProfile({
      {0.0, 50.0, SegmentKind::Polynomial, {0.0, 0.0, 75.0 / 2500.0, -1.0 / 2500.0}},
      {50.0, 70.0, SegmentKind::Constant, {25.0}},
      {70.0, 80.0, SegmentKind::Polynomial, {-8305.0, 336.0, -4.5, 0.02}},
      {80.0, 90.0, SegmentKind::Constant, {15.0}},
      {90.0, 120.0, SegmentKind::Cosine, {17.5, -2.5, 0.5, 90.0}},
  });
}

}  // namespace platoon
