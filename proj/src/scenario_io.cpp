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

#include "platoon/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace platoon {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw std::invalid_argument("scenario key '" + key + "': " + what);
}

const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad(path + key, "missing");
  return j.at(key);
}

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  return j.get<double>();
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  return number(obj.at(key), path + key);
}

std::vector<double> numbers(const Json& j, const std::string& key) {
  if (!j.is_array()) bad(key, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, key));
  return out;
}

/// Fixed number or [lo, hi] uniform range drawn from rng.
double draw(const Json& spec, std::mt19937_64& rng, const std::string& key) {
  if (spec.is_number()) return spec.get<double>();
  if (spec.is_array() && spec.size() == 2 && spec[0].is_number() && spec[1].is_number()) {
    const double lo = spec[0].get<double>();
    const double hi = spec[1].get<double>();
    if (!(lo <= hi)) bad(key, "range must satisfy lo <= hi");
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  bad(key, "expected a number or a [lo, hi] range");
}

FormationSpec formation_from_json(const Json& j) {
  FormationSpec f;
  f.collision_gap = number(need(j, "collision_gap", "formation."), "formation.collision_gap");
  f.connectivity_gap = number(need(j, "connectivity_gap", "formation."), "formation.connectivity_gap");
  if (j.contains("desired_gaps")) {
    f.desired_gaps = numbers(j.at("desired_gaps"), "formation.desired_gaps");
  } else {
    const Json& count = need(j, "count", "formation.");
    if (!count.is_number_integer() || count.get<long long>() < 1) bad("formation.count", "expected an integer >= 1");
    const double gap = number(need(j, "gap", "formation."), "formation.gap");
    f.desired_gaps.assign(count.get<std::size_t>(), gap);
  }
  return f;
}

PositionEnvelopeSpec position_envelope_from_json(const Json& j, std::size_t n) {
  PositionEnvelopeSpec p;
  p.decay = number(need(j, "decay", "position_envelope."), "position_envelope.decay");
  p.steady_bound.reset();
  if (j.contains("steady_bound")) {
    const Json& sb = j.at("steady_bound");
    if (sb.is_string()) {
      if (sb.get<std::string>() != "sigma-scaled") bad("position_envelope.steady_bound", "expected a number or \"sigma-scaled\"");
      p.steady_bound = sigma_scaled_bound(n, number_or(j, "sigma_factor", 0.5, "position_envelope."));
    } else {
      p.steady_bound = number(sb, "position_envelope.steady_bound");
    }
  } else if (j.contains("rho_inf")) {
    p.rho_inf = number(j.at("rho_inf"), "position_envelope.rho_inf");
  } else {
    bad("position_envelope", "needs steady_bound or rho_inf");
  }
  return p;
}

void resolve_fleet(const Json& doc, std::size_t n, std::mt19937_64& rng, Scenario& s) {
  if (doc.contains("vehicles") || doc.contains("disturbances")) {
    for (const auto& v : need(doc, "vehicles", "")) {
      s.vehicles.push_back({number(need(v, "mass", "vehicles[]."), "vehicles[].mass"),
                            number(need(v, "drag_linear", "vehicles[]."), "vehicles[].drag_linear"),
                            number(need(v, "drag_quadratic", "vehicles[]."), "vehicles[].drag_quadratic")});
    }
    for (const auto& d : need(doc, "disturbances", "")) {
      s.disturbances.push_back({number(need(d, "amplitude", "disturbances[]."), "disturbances[].amplitude"),
                                number(need(d, "angular_frequency", "disturbances[]."),
                                       "disturbances[].angular_frequency"),
                                number(need(d, "phase", "disturbances[]."), "disturbances[].phase")});
    }
    return;
  }
  const Json& fleet = need(doc, "fleet", "");
  auto field = [&](const char* key) -> const Json& { return need(fleet, key, "fleet."); };
  for (std::size_t i = 0; i < n; ++i) {
    VehicleParams v;
    v.mass = draw(field("mass"), rng, "fleet.mass");
    v.drag_linear = draw(field("drag_linear"), rng, "fleet.drag_linear");
    v.drag_quadratic = draw(field("drag_quadratic"), rng, "fleet.drag_quadratic");
    Disturbance d;
    d.amplitude = draw(field("amplitude"), rng, "fleet.amplitude");
    d.angular_frequency = draw(field("angular_frequency"), rng, "fleet.angular_frequency");
    d.phase = draw(field("phase"), rng, "fleet.phase");
    s.vehicles.push_back(v);
    s.disturbances.push_back(d);
  }
}

void resolve_initial(const Json& doc, std::mt19937_64& rng, Scenario& s) {
  const Json& init = need(doc, "initial", "");
  s.initial_leader_position = number_or(init, "leader_position", 0.0, "initial.");
  if (init.contains("positions")) {
    s.initial_positions = numbers(init.at("positions"), "initial.positions");
    s.initial_velocities = numbers(need(init, "velocities", "initial."), "initial.velocities");
    return;
  }
  // Desired slot plus a uniform offset in (-f lower_i, f upper_i).
  const double fraction = number_or(init, "offset_fraction", 0.5, "initial.");
  if (fraction < 0.0 || fraction >= 1.0) bad("initial.offset_fraction", "must lie in [0, 1)");
  const double velocity = number_or(init, "velocity", 0.0, "initial.");
  s.formation.validate();
  for (std::size_t i = 1; i <= s.formation.size(); ++i) {
    const EnvelopeMargins m = margins_from_formation(s.formation, i);
    double offset = 0.0;
    if (fraction > 0.0) offset = std::uniform_real_distribution<double>(-fraction * m.lower, fraction * m.upper)(rng);
    s.initial_positions.push_back(s.initial_leader_position - s.formation.offset_from_leader(i) + offset);
    s.initial_velocities.push_back(velocity);
  }
}

}  // namespace

double sigma_scaled_bound(std::size_t n, double factor) {
  return factor * sigma_min(TopologyMatrix(n)) / std::sqrt(static_cast<double>(n));
}

LeaderProfile leader_from_json(const Json& j) {
  std::vector<LeaderSegment> segments;
  for (const auto& seg : need(j, "segments", "leader.")) {
    LeaderSegment s;
    s.t_start = number(need(seg, "t_start", "leader.segments[]."), "leader.segments[].t_start");
    s.t_end = number(need(seg, "t_end", "leader.segments[]."), "leader.segments[].t_end");
    const Json& kind = need(seg, "kind", "leader.segments[].");
    if (!kind.is_string()) bad("leader.segments[].kind", "expected a string");
    s.kind = segment_kind_from_string(kind.get<std::string>());
    s.coefficients = numbers(need(seg, "coefficients", "leader.segments[]."), "leader.segments[].coefficients");
    segments.push_back(std::move(s));
  }
  return LeaderProfile(std::move(segments));
}

Json leader_to_json(const LeaderProfile& profile) {
  Json segments = Json::array();
  for (const auto& s : profile.segments()) {
    segments.push_back({{"t_start", s.t_start}, {"t_end", s.t_end}, {"kind", to_string(s.kind)},
                        {"coefficients", s.coefficients}});
  }
  return Json{{"segments", segments}};
}

Scenario resolve_scenario(const Json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("scenario document must be a JSON object");
  Scenario s;
  const Json& seed = need(doc, "seed", "");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    bad("seed", "expected a non-negative integer");
  }
  s.seed = seed.get<std::uint64_t>();
  std::mt19937_64 rng(s.seed);

  if (doc.contains("name")) s.name = doc.at("name").get<std::string>();
  s.controller = ControllerChoice::parse(need(doc, "architecture", "").get<std::string>());
  if (doc.contains("mode")) s.mode = control_mode_from_string(doc.at("mode").get<std::string>());
  s.dt = number(need(doc, "dt", ""), "dt");
  s.horizon = number(need(doc, "T", ""), "T");
  if (doc.contains("record_stride")) {
    const Json& rs = doc.at("record_stride");
    if (!rs.is_number_integer() || rs.get<long long>() < 1) bad("record_stride", "expected an integer >= 1");
    s.record_stride = rs.get<std::size_t>();
  }
  s.transient_time = number_or(doc, "t_s", s.transient_time, "");

  const Json& gains = need(doc, "gains", "");
  s.gains.kp = number(need(gains, "kp", "gains."), "gains.kp");
  s.gains.kv = number(need(gains, "kv", "gains."), "gains.kv");
  if (doc.contains("baseline_gains")) {
    const Json& b = doc.at("baseline_gains");
    s.baseline_gains.ka = number_or(b, "ka", s.baseline_gains.ka, "baseline_gains.");
    s.baseline_gains.kb = number_or(b, "kb", s.baseline_gains.kb, "baseline_gains.");
    s.baseline_gains.model_bias = number_or(b, "model_bias", s.baseline_gains.model_bias, "baseline_gains.");
  }

  s.formation = formation_from_json(need(doc, "formation", ""));
  const std::size_t n = s.formation.size();
  s.leader = leader_from_json(need(doc, "leader", ""));
  s.position_envelope = position_envelope_from_json(need(doc, "position_envelope", ""), n);
  const Json& ve = need(doc, "velocity_envelope", "");
  s.velocity_envelope.scale = number_or(ve, "scale", s.velocity_envelope.scale, "velocity_envelope.");
  s.velocity_envelope.floor = number_or(ve, "floor", s.velocity_envelope.floor, "velocity_envelope.");
  s.velocity_envelope.decay = number_or(ve, "decay", s.velocity_envelope.decay, "velocity_envelope.");

  resolve_fleet(doc, n, rng, s);
  resolve_initial(doc, rng, s);
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json vehicles = Json::array();
  for (const auto& v : s.vehicles) {
    vehicles.push_back({{"mass", v.mass}, {"drag_linear", v.drag_linear}, {"drag_quadratic", v.drag_quadratic}});
  }
  Json disturbances = Json::array();
  for (const auto& d : s.disturbances) {
    disturbances.push_back({{"amplitude", d.amplitude}, {"angular_frequency", d.angular_frequency}, {"phase", d.phase}});
  }
  Json pe{{"decay", s.position_envelope.decay}};
  if (s.position_envelope.steady_bound) {
    pe["steady_bound"] = *s.position_envelope.steady_bound;
  } else if (s.position_envelope.rho_inf) {
    pe["rho_inf"] = *s.position_envelope.rho_inf;
  }
  return Json{
      {"name", s.name},
      {"seed", s.seed},
      {"architecture", s.controller.name()},
      {"mode", to_string(s.mode)},
      {"dt", s.dt},
      {"T", s.horizon},
      {"record_stride", s.record_stride},
      {"t_s", s.transient_time},
      {"gains", {{"kp", s.gains.kp}, {"kv", s.gains.kv}}},
      {"baseline_gains",
       {{"ka", s.baseline_gains.ka}, {"kb", s.baseline_gains.kb}, {"model_bias", s.baseline_gains.model_bias}}},
      {"formation",
       {{"desired_gaps", s.formation.desired_gaps},
        {"collision_gap", s.formation.collision_gap},
        {"connectivity_gap", s.formation.connectivity_gap}}},
      {"leader", leader_to_json(s.leader)},
      {"position_envelope", pe},
      {"velocity_envelope",
       {{"scale", s.velocity_envelope.scale},
        {"floor", s.velocity_envelope.floor},
        {"decay", s.velocity_envelope.decay}}},
      {"vehicles", vehicles},
      {"disturbances", disturbances},
      {"initial",
       {{"leader_position", s.initial_leader_position},
        {"positions", s.initial_positions},
        {"velocities", s.initial_velocities}}},
  };
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override '" + assignment + "' must have the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw std::invalid_argument("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw std::invalid_argument("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

namespace {

Json reference_fleet() {
  constexpr double pi = std::numbers::pi;
  return Json{{"mass", {500.0, 1500.0}},
              {"drag_linear", 50.0},
              {"drag_quadratic", 25.0},
              {"amplitude", {1000.0, 1500.0}},
              {"angular_frequency", {2.0 * pi, 4.0 * pi}},
              {"phase", {0.0, 2.0 * pi}}};
}

Json generic_evaluation(const std::string& name, const std::string& arch, double kp, double kv) {
  return Json{
      {"name", name},
      {"seed", 2017},
      {"architecture", arch},
      {"mode", "dynamic"},
      {"dt", 1e-3},
      {"T", 120.0},
      {"record_stride", 10},
      {"t_s", 50.0},
      {"gains", {{"kp", kp}, {"kv", kv}}},
      {"baseline_gains", {{"ka", 1.0}, {"kb", 2.0}, {"model_bias", 0.15}}},
      {"formation", {{"count", 10}, {"gap", 4.0}, {"collision_gap", 0.2}, {"connectivity_gap", 7.8}}},
      {"leader", leader_to_json(reference_leader_profile())},
      {"position_envelope", {{"decay", 0.1}, {"steady_bound", 0.05}}},
      {"velocity_envelope", {{"scale", 2.0}, {"floor", 0.1}, {"decay", 0.1}}},
      {"fleet", reference_fleet()},
      {"initial", {{"leader_position", 0.0}, {"offset_fraction", 0.5}, {"velocity", 0.0}}},
  };
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-pf", "paper-bd", "paper-scaling", "hallway-kinematic", "equilibrium"};
}

Json preset_document(const std::string& name) {
  if (name == "paper-pf" || name == "paper-bd") {
    Json doc = name == "paper-pf" ? generic_evaluation(name, "pf", 0.1, 100.0)
                                  : generic_evaluation(name, "bd", 10.0, 1000.0);
    doc["dt"] = 1e-4;
    doc["record_stride"] = 100;
    doc["initial"]["offset_fraction"] = 0.0;
    return doc;
  }
  if (name == "paper-scaling") {
    Json doc = generic_evaluation(name, "pf", 0.1, 100.0);
    doc["position_envelope"] = {{"decay", 2.0}, {"steady_bound", "sigma-scaled"}, {"sigma_factor", 0.5}};
    doc["velocity_envelope"]["decay"] = 2.0;
    doc["initial"] = {{"leader_position", 0.0}, {"offset_fraction", 0.0}, {"velocity", 0.0}};
    doc["dt"] = 1e-4;
    doc["record_stride"] = 100;
    doc["sweep"] = {{"Ns", {10, 50, 100}},
                    {"dt_reference_n", 10},
                    {"controllers", {"pf", "bd", "baseline-linear-pf", "baseline-linear-bd"}},
                    {"gains", {{"pf", {{"kp", 0.1}, {"kv", 100.0}}}, {"bd", {{"kp", 10.0}, {"kv", 1000.0}}}}}};
    return doc;
  }
  if (name == "hallway-kinematic") {
    return Json{
        {"name", name},
        {"seed", 5},
        {"architecture", "pf"},
        {"mode", "kinematic"},
        {"dt", 1e-3},
        {"T", 18.0},
        {"record_stride", 10},
        {"t_s", 6.0},
        {"gains", {{"kp", 0.001}, {"kv", 1.0}}},
        {"formation", {{"count", 4}, {"gap", 0.2}, {"collision_gap", 0.05}, {"connectivity_gap", 0.65}}},
        {"leader", leader_to_json(LeaderProfile::constant(0.3, 18.0))},
        {"position_envelope", {{"decay", 0.5}, {"rho_inf", 0.22}}},
        {"velocity_envelope", {{"scale", 2.0}, {"floor", 0.1}, {"decay", 0.5}}},
        {"fleet",
         {{"mass", 30.0}, {"drag_linear", 0.0}, {"drag_quadratic", 0.0}, {"amplitude", 0.0},
          {"angular_frequency", 0.0}, {"phase", 0.0}}},
        {"initial", {{"leader_position", 0.0}, {"offset_fraction", 0.5}, {"velocity", 0.0}}},
    };
  }
  if (name == "equilibrium") {
    Json doc = generic_evaluation(name, "pf", 0.1, 100.0);
    doc["T"] = 60.0;
    doc["t_s"] = 20.0;
    doc["leader"] = leader_to_json(LeaderProfile::constant(0.0, 60.0));
    doc["fleet"]["amplitude"] = 0.0;
    doc["initial"] = {{"leader_position", 0.0}, {"offset_fraction", 0.0}, {"velocity", 0.0}};
    return doc;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::string scenario_hash(const Scenario& s) {
  const std::string text = scenario_to_json(s).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace platoon
