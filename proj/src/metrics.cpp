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

#include "platoon/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

namespace platoon {

namespace {

double integrand(const Trajectory& traj, std::size_t r) {
  const auto row = static_cast<Eigen::Index>(r);
  const double n = static_cast<double>(traj.vehicles());
  const auto e0 = traj.leader_error.row(row).array();
  const auto de0 = traj.leader_velocity[r] - traj.velocity.row(row).array();
  return (e0.square() + de0.square()).sum() / n;
}

}  // namespace

double energy_integral(const Trajectory& traj, double a, double b) {
  const std::size_t m = traj.samples();
  if (m < 2) throw std::invalid_argument("energy_integral: trajectory needs at least two samples");
  const double t0 = traj.time.front();
  const double t1 = traj.time.back();
  if (!(a >= t0 && b <= t1 && a <= b)) {
    throw std::invalid_argument("energy_integral: interval outside the recorded time span");
  }
  // f linearly interpolated between samples k and k+1 at time t.
  auto value_at = [&](std::size_t k, double t) {
    const double fa = integrand(traj, k);
    const double fb = integrand(traj, k + 1);
    const double w = (t - traj.time[k]) / (traj.time[k + 1] - traj.time[k]);
    return fa + w * (fb - fa);
  };

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double lo = std::max(a, traj.time[k]);
    const double hi = std::min(b, traj.time[k + 1]);
    if (hi <= lo) continue;
    total += 0.5 * (hi - lo) * (value_at(k, lo) + value_at(k, hi));
  }
  return total;
}

EnergyMetrics energy_metrics(const Trajectory& traj, double t_s) {
  if (traj.samples() < 2) throw std::invalid_argument("energy_metrics: trajectory needs at least two samples");
  const double horizon = traj.time.back();
  if (!(t_s > traj.time.front() && t_s < horizon)) {
    throw std::invalid_argument("energy_metrics: t_s must lie strictly inside the trajectory span");
  }
  return {energy_integral(traj, traj.time.front(), t_s), energy_integral(traj, t_s, horizon), t_s, horizon};
}

StringStabilityVerdict string_stability_check(const Trajectory& traj, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("string_stability_check: epsilon must be > 0");
  StringStabilityVerdict verdict;
  verdict.epsilon = epsilon;
  verdict.sup_error = traj.position_error.size() == 0 ? 0.0 : traj.position_error.cwiseAbs().maxCoeff();
  verdict.pass = verdict.sup_error < epsilon;
  return verdict;
}

StringStabilityVerdict string_stability_check(const Trajectory& traj) {
  double widest = 0.0;
  for (const auto& m : traj.margins) widest = std::max(widest, m.widest());
  return string_stability_check(traj, widest);
}

SweepConfig sweep_config_from_document(const Json& base) {
  SweepConfig config;
  if (base.contains("sweep")) {
    const Json& sweep = base.at("sweep");
    if (sweep.contains("Ns")) config.ns = sweep.at("Ns").get<std::vector<std::size_t>>();
    if (sweep.contains("controllers")) config.controllers = sweep.at("controllers").get<std::vector<std::string>>();
  }
  if (config.controllers.empty()) config.controllers = {"pf", "bd", "baseline-linear-pf", "baseline-linear-bd"};
  return config;
}

Json sweep_row_document(const Json& base, std::size_t n, const std::string& controller) {
  if (n == 0) throw std::invalid_argument("sweep: N must be >= 1");
  const ControllerChoice choice = ControllerChoice::parse(controller);
  Json doc = base;
  doc.erase("sweep");
  doc.erase("vehicles");
  doc.erase("disturbances");
  doc["architecture"] = controller;
  doc["name"] = base.value("name", std::string("sweep")) + "/" + controller + "/N=" + std::to_string(n);

  Json& formation = doc["formation"];
  if (formation.contains("desired_gaps")) {
    const auto gaps = formation.at("desired_gaps").get<std::vector<double>>();
    if (gaps.empty()) throw std::invalid_argument("sweep: template formation has no gaps");
    formation.erase("desired_gaps");
    formation["gap"] = gaps.front();
  }
  formation["count"] = n;

  if (base.contains("sweep")) {
    const Json& sweep = base.at("sweep");
    const std::string arch = to_string(choice.architecture);
    if (sweep.contains("gains") && sweep.at("gains").contains(arch)) {
      for (const auto& [key, value] : sweep.at("gains").at(arch).items()) doc["gains"][key] = value;
    }
    if (sweep.contains("dt_reference_n") && choice.controller == ControllerKind::PrescribedPerformance) {
      const auto ref = sweep.at("dt_reference_n").get<std::size_t>();
      const double factor = std::min(1.0, sigma_scaled_bound(n) / sigma_scaled_bound(ref));
      doc["dt"] = doc.at("dt").get<double>() * factor;
      // Keep the recorded sample interval fixed.
      const auto stride = doc.value("record_stride", std::size_t{10});
      doc["record_stride"] = static_cast<std::size_t>(std::llround(static_cast<double>(stride) / factor));
    }
  }
  // Explicit initial arrays would have the template's length.
  if (doc.contains("initial") && doc["initial"].contains("positions")) {
    throw std::invalid_argument("sweep: template must give the initial state as a generator, not explicit arrays");
  }
  return doc;
}

std::vector<SweepRow> scalability_sweep(const Json& base, const SweepConfig& config) {
  if (config.ns.empty()) throw std::invalid_argument("sweep: Ns is empty");
  if (config.controllers.empty()) throw std::invalid_argument("sweep: no controllers selected");

  struct Task {
    std::string controller;
    std::size_t n;
  };
  std::vector<Task> tasks;
  for (const auto& c : config.controllers) {
    (void)ControllerChoice::parse(c);
    for (std::size_t n : config.ns) tasks.push_back({c, n});
  }
  std::vector<SweepRow> rows(tasks.size());

  auto run_task = [&](std::size_t k) {
    const Task& task = tasks[k];
    const ControllerChoice choice = ControllerChoice::parse(task.controller);
    SweepRow& row = rows[k];
    row.controller = to_string(choice.controller);
    row.architecture = to_string(choice.architecture);
    row.n = task.n;
    const Scenario scenario = resolve_scenario(sweep_row_document(base, task.n, task.controller));
    row.seed = scenario.seed;
    row.dt = scenario.dt;
    const RunOutcome outcome = simulate(validate_scenario(scenario));
    row.wall_time = outcome.wall_time;
    row.max_abs_u = max_abs_control(outcome.trajectory);
    if (outcome.violation) {
      row.violated = true;
      row.diagnostic = outcome.violation->what();
      row.e_ts = row.e_ss = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const EnergyMetrics m = energy_metrics(outcome.trajectory, scenario.transient_time);
    row.e_ts = m.e_ts;
    row.e_ss = m.e_ss;
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(tasks.size())));
  if (jobs == 1) {
    for (std::size_t k = 0; k < tasks.size(); ++k) run_task(k);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t k = next++; k < tasks.size(); k = next++) run_task(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "controller,architecture,N,E_ts,E_ss,violated\n";
  const auto old_precision = out.precision();
  out << std::setprecision(9);
  for (const auto& r : rows) {
    out << r.controller << ',' << r.architecture << ',' << r.n << ',' << r.e_ts << ',' << r.e_ss << ','
        << (r.violated ? "true" : "false") << '\n';
  }
  out.precision(old_precision);
}

Json sweep_summary_json(const std::vector<SweepRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row{{"controller", r.controller},
             {"architecture", r.architecture},
             {"N", r.n},
             {"violated", r.violated},
             {"max_abs_u", r.max_abs_u},
             {"dt", r.dt},
             {"seed", r.seed},
             {"wall_time", r.wall_time}};
    row["E_ts"] = r.violated ? Json(nullptr) : Json(r.e_ts);
    row["E_ss"] = r.violated ? Json(nullptr) : Json(r.e_ss);
    if (r.violated) row["diagnostic"] = r.diagnostic;
    out.push_back(std::move(row));
  }
  return Json{{"rows", out}};
}

}  // namespace platoon
