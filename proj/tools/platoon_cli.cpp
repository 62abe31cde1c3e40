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

// platoon: run, sweep and validate platoon scenarios.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "platoon/metrics.hpp"
#include "platoon/scenario_io.hpp"
#include "platoon/simulation.hpp"

namespace fs = std::filesystem;
using platoon::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitViolation = 2;
constexpr int kExitIo = 3;

struct Source {
  std::string preset;
  std::string scenario_file;
  std::vector<std::string> overrides;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_source_options(CLI::App* cmd, Source& src) {
  auto* preset = cmd->add_option("--preset", src.preset, "embedded preset name");
  auto* file = cmd->add_option("--scenario", src.scenario_file, "scenario JSON file");
  preset->excludes(file);
  cmd->add_option("--set", src.overrides, "override key=value (dotted keys, repeatable)");
}

Json load_document(const Source& src) {
  Json doc;
  if (!src.scenario_file.empty()) {
    std::ifstream in(src.scenario_file);
    if (!in) throw IoError("cannot read scenario file '" + src.scenario_file + "'");
    try {
      in >> doc;
    } catch (const Json::parse_error& e) {
      throw std::invalid_argument("scenario file '" + src.scenario_file + "': " + e.what());
    }
  } else if (!src.preset.empty()) {
    doc = platoon::preset_document(src.preset);
  } else {
    throw std::invalid_argument("one of --preset or --scenario is required");
  }
  for (const auto& o : src.overrides) platoon::apply_override(doc, o);
  return doc;
}

fs::path prepare_out(const std::string& dir) {
  const fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

void write_json(const fs::path& path, const Json& j) {
  auto f = open_out(path);
  f << std::setw(2) << j << '\n';
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

int cmd_run(const Source& src, const std::string& out_dir) {
  const Json doc = load_document(src);
  const platoon::Scenario scenario = platoon::resolve_scenario(doc);
  const platoon::ValidatedScenario vs = platoon::validate_scenario(scenario);
  const fs::path out = prepare_out(out_dir);

  const platoon::RunOutcome outcome = platoon::simulate(vs);
  const platoon::Trajectory& traj = outcome.trajectory;
  {
    auto f = open_out(out / "trajectory.csv");
    platoon::write_trajectory_csv(f, traj);
    if (!f) throw IoError("write failed for '" + (out / "trajectory.csv").string() + "'");
  }

  Json summary{{"name", scenario.name},
               {"scenario_hash", platoon::scenario_hash(scenario)},
               {"seed", scenario.seed},
               {"architecture", platoon::ControllerChoice{scenario.controller}.name()},
               {"mode", platoon::to_string(scenario.mode)},
               {"N", scenario.vehicles.size()},
               {"dt", scenario.dt},
               {"T", scenario.horizon},
               {"violated", outcome.violated()},
               {"t_end", traj.samples() ? traj.time.back() : 0.0},
               {"max_abs_u", platoon::max_abs_control(traj)},
               {"wall_time", outcome.wall_time}};
  if (traj.samples() > 0) {
    const auto last = static_cast<Eigen::Index>(traj.samples() - 1);
    std::vector<double> final_errors(traj.position_error.cols());
    for (Eigen::Index i = 0; i < traj.position_error.cols(); ++i) final_errors[i] = traj.position_error(last, i);
    summary["final_errors"] = final_errors;
    summary["max_abs_error"] = traj.position_error.cwiseAbs().maxCoeff();
    const auto [gmin, gmax] = platoon::gap_range(traj);
    summary["gap_range"] = {gmin, gmax};
  }
  if (vs.uses_envelopes() && !outcome.violated()) {
    summary["position_containment_slack"] = platoon::position_containment_slack(traj);
    if (scenario.mode == platoon::ControlMode::Dynamic) summary["max_abs_velocity_xi"] = platoon::max_abs_velocity_xi(traj);
  }
  if (!outcome.violated() && scenario.transient_time < traj.time.back()) {
    const auto m = platoon::energy_metrics(traj, scenario.transient_time);
    summary["E_ts"] = m.e_ts;
    summary["E_ss"] = m.e_ss;
    summary["t_s"] = m.t_s;
  }
  if (outcome.violation) {
    const auto& v = *outcome.violation;
    summary["violation"] = {{"message", v.what()},
                            {"time", finite_or_null(v.time)},
                            {"vehicle", v.vehicle},
                            {"kind", platoon::to_string(v.kind)},
                            {"value", v.value},
                            {"lower", v.lower},
                            {"upper", v.upper}};
  }
  write_json(out / "summary.json", summary);

  std::cout << "seed " << scenario.seed << ", hash " << summary["scenario_hash"].get<std::string>() << '\n';
  if (outcome.violation) {
    std::cerr << "error: " << outcome.violation->what() << '\n';
    return kExitViolation;
  }
  std::cout << "ok: " << traj.samples() << " samples, max |u| = " << summary["max_abs_u"].get<double>()
            << ", wrote " << out.string() << '\n';
  return kExitOk;
}

std::vector<std::size_t> parse_ns(const std::string& list) {
  std::vector<std::size_t> ns;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--Ns: '" + item + "' is not an integer");
    }
    if (used != item.size() || v < 1) throw std::invalid_argument("--Ns: '" + item + "' must be a positive integer");
    ns.push_back(static_cast<std::size_t>(v));
  }
  return ns;
}

int cmd_sweep(const Source& src, const std::string& out_dir, const std::string& ns_list,
              const std::vector<std::string>& controllers, unsigned jobs, bool ns_given) {
  const Json doc = load_document(src);
  platoon::SweepConfig config = platoon::sweep_config_from_document(doc);
  if (ns_given) config.ns = parse_ns(ns_list);
  if (config.ns.empty()) throw std::invalid_argument("sweep: Ns is empty");
  if (!controllers.empty()) config.controllers = controllers;
  config.jobs = jobs;
  // Rejects a bad template before any row runs.
  (void)platoon::validate_scenario(platoon::resolve_scenario(
      platoon::sweep_row_document(doc, config.ns.front(), config.controllers.front())));
  const fs::path out = prepare_out(out_dir);

  const auto rows = platoon::scalability_sweep(doc, config);
  {
    auto f = open_out(out / "sweep.csv");
    platoon::write_sweep_csv(f, rows);
  }
  Json summary = platoon::sweep_summary_json(rows);
  summary["seed"] = doc.at("seed");
  summary["Ns"] = config.ns;
  summary["controllers"] = config.controllers;
  write_json(out / "sweep.json", summary);

  for (const auto& r : rows) {
    std::cout << std::left << std::setw(16) << r.controller << std::setw(4) << r.architecture << " N=" << std::setw(5)
              << r.n;
    if (r.violated) {
      std::cout << "violated: " << r.diagnostic << '\n';
    } else {
      std::cout << "E_ts=" << r.e_ts << " E_ss=" << r.e_ss << '\n';
    }
  }
  std::cout << "wrote " << (out / "sweep.csv").string() << '\n';
  return kExitOk;
}

int cmd_validate(const Source& src) {
  const Json doc = load_document(src);
  const platoon::Scenario scenario = platoon::resolve_scenario(doc);
  std::cout << "scenario " << scenario.name << " (seed " << scenario.seed << ", hash "
            << platoon::scenario_hash(scenario) << ")\n";
  std::cout << "N=" << scenario.vehicles.size() << " architecture=" << platoon::ControllerChoice{scenario.controller}.name()
            << " mode=" << platoon::to_string(scenario.mode) << " dt=" << scenario.dt << " T=" << scenario.horizon
            << '\n';
  const platoon::ValidatedScenario vs = platoon::validate_scenario(scenario);

  std::cout << "initial gaps: all inside (" << scenario.formation.collision_gap << ", "
            << scenario.formation.connectivity_gap << ") ok\n";
  std::cout << std::setw(4) << "i" << std::setw(12) << "gap" << std::setw(12) << "lower" << std::setw(12) << "upper"
            << std::setw(14) << "init_gap" << '\n';
  double previous = scenario.initial_leader_position;
  for (std::size_t i = 0; i < vs.margins.size(); ++i) {
    const double gap = previous - scenario.initial_positions[i];
    previous = scenario.initial_positions[i];
    std::cout << std::setw(4) << i + 1 << std::setw(12) << scenario.formation.desired_gaps[i] << std::setw(12)
              << vs.margins[i].lower << std::setw(12) << vs.margins[i].upper << std::setw(14) << gap << '\n';
  }
  if (vs.uses_envelopes()) {
    const auto& p = vs.position_envelopes.front();
    std::cout << "position envelope: rho0=" << p.rho0 << " rho_inf=" << p.rho_inf << " decay=" << p.decay << '\n';
    if (!vs.velocity_envelopes.empty()) {
      const auto& v = scenario.velocity_envelope;
      std::cout << "velocity envelope: scale=" << v.scale << " floor=" << v.floor << " decay=" << v.decay << '\n';
    }
  }
  std::cout << "valid\n";
  return kExitOk;
}

int cmd_presets(const std::string& dump) {
  if (!dump.empty()) {
    std::cout << std::setw(2) << platoon::preset_document(dump) << '\n';
    return kExitOk;
  }
  for (const auto& name : platoon::preset_names()) std::cout << name << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prescribed-performance platoon simulator"};
  app.require_subcommand(1);

  Source run_src, sweep_src, validate_src;
  std::string run_out = "out", sweep_out = "out", ns_list, dump;
  std::vector<std::string> controllers;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "simulate one scenario");
  add_source_options(run, run_src);
  run->add_option("--out", run_out, "output directory")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "run a scenario template over several platoon sizes");
  add_source_options(sweep, sweep_src);
  sweep->add_option("--out", sweep_out, "output directory")->capture_default_str();
  auto* ns_opt = sweep->add_option("--Ns", ns_list, "comma-separated platoon sizes");
  sweep->add_option("--controllers", controllers, "pf, bd, baseline-linear-pf, baseline-linear-bd")->delimiter(',');
  sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber)->capture_default_str();

  auto* validate = app.add_subcommand("validate", "check a scenario without simulating");
  add_source_options(validate, validate_src);

  auto* presets = app.add_subcommand("presets", "list embedded presets");
  presets->add_option("--dump", dump, "print the named preset as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_src, run_out);
    if (*sweep) return cmd_sweep(sweep_src, sweep_out, ns_list, controllers, jobs, ns_opt->count() > 0);
    if (*validate) return cmd_validate(validate_src);
    if (*presets) return cmd_presets(dump);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const platoon::EnvelopeViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
