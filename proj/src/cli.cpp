// Copyright 2026 The Tetherplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tetherplan/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tetherplan/scenario.hpp"
#include "tetherplan/svg_plot.hpp"

namespace tetherplan {

namespace {

int log_verbosity() {
  const char* env = std::getenv("TETHERPLAN_LOG");
  if (env == nullptr) return 1;
  try {
    return std::max(0, std::stoi(env));
  } catch (...) {
    return 1;
  }
}

void info(std::ostream& err, const std::string& msg) {
  if (log_verbosity() >= 2) err << "[tetherplan] " << msg << "\n";
}

void print_breakdown(std::ostream& out, const RiskBreakdown& b) {
  out << "  distance=" << b.distance << " visibility=" << b.visibility
      << " altitude=" << b.altitude << " singularity=" << b.singularity
      << "\n  action_length=" << b.action_length << " access=" << b.access
      << " tortuosity=" << b.tortuosity
      << " tether_length=" << b.tether_length
      << " contacts=" << b.contact_count << " azimuth=" << b.azimuth_sweep
      << "\n";
}

std::filesystem::path resolve_out_dir(const Scenario& scenario,
                                      const std::string& out_flag) {
  return out_flag.empty() ? scenario.out_dir
                          : std::filesystem::path(out_flag);
}

int cmd_plan(std::ostream& out, std::ostream& err,
             const std::string& scenario_path, const std::string& out_flag) {
  const Scenario scenario = load_scenario(scenario_path);
  info(err, "planning scenario " + scenario.name);
  const PlanResult plan_result =
      plan(*scenario.world.grid, *scenario.reward_map, scenario.weights,
           scenario.start, scenario.world.anchor, scenario.planner);

  const auto dir = resolve_out_dir(scenario, out_flag);
  const auto plan_path = dir / (scenario.name + ".plan.json");
  write_plan_file(plan_path, plan_result, scenario);

  out << "scenario: " << scenario.name << "\n";
  out << "utility: " << plan_result.utility << "\n";
  out << "terminal reward: " << plan_result.terminal_reward << "\n";
  out << "risk total: " << plan_result.total_risk << "\n";
  print_breakdown(out, plan_result.breakdown);
  out << "contacts: "
      << plan_result.path.states.back().tether.contact_count() << "\n";
  out << "waypoints: " << plan_result.path.size() << "\n";
  out << "plan written: " << plan_path.string() << "\n";
  return 0;
}

int cmd_simulate(std::ostream& out, std::ostream& err,
                 const std::string& scenario_path,
                 const std::string& plan_path,
                 const std::optional<std::uint64_t>& seed, bool plot,
                 const std::string& out_flag) {
  Scenario scenario = load_scenario(scenario_path);
  if (seed) scenario.sim.seed = *seed;
  const PlanResult plan_result = read_plan_file(plan_path, scenario);
  info(err, "simulating scenario " + scenario.name);

  const SimResult sim_result =
      simulate(plan_result, *scenario.world.grid, *scenario.reward_map,
               scenario.weights, scenario.sim, scenario.controller);

  const auto dir = resolve_out_dir(scenario, out_flag);
  const auto traj_path = dir / (scenario.name + ".trajectory.csv");
  const auto metrics_path = dir / (scenario.name + ".metrics.json");
  write_trajectory_csv(traj_path, sim_result.log);
  write_metrics_file(metrics_path, sim_result.metrics);

  out << "scenario: " << scenario.name << "\n";
  out << "steps: " << sim_result.metrics.steps << "\n";
  out << "reward collected: " << sim_result.metrics.reward_collected << "\n";
  out << "risk encountered: " << sim_result.metrics.risk_encountered
      << " (planned " << sim_result.metrics.planned_risk << ")\n";
  out << "flight accuracy (RMS cross-track): "
      << sim_result.metrics.flight_accuracy << " m\n";
  out << "contacts peak: " << sim_result.metrics.contacts_peak << "\n";
  out << "trajectory written: " << traj_path.string() << "\n";
  out << "metrics written: " << metrics_path.string() << "\n";
  if (plot) {
    const auto svg_path = dir / (scenario.name + ".svg");
    atomic_write(svg_path,
                 render_slice_svg(*scenario.world.grid, plan_result,
                                  sim_result.log, scenario.world.anchor));
    out << "plot written: " << svg_path.string() << "\n";
  }
  return 0;
}

int cmd_localize(std::ostream& out, double length, double elevation,
                 double azimuth, const std::vector<double>& anchor,
                 const std::string& contacts_path) {
  if (!(length >= 0.0)) throw ConfigError("length must be >= 0");
  if (elevation < -kPi / 2.0 || elevation > kPi / 2.0) {
    throw ConfigError("elevation must lie in [-pi/2, pi/2]");
  }
  if (azimuth <= -kPi || azimuth > kPi) {
    throw ConfigError("azimuth must lie in (-pi, pi]");
  }
  const Vec3 anchor_pos{anchor[0], anchor[1], anchor[2]};

  Vec3 last_vertex = anchor_pos;
  if (!contacts_path.empty()) {
    std::ifstream in(contacts_path);
    if (!in) throw ConfigError("cannot open file: " + contacts_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("failed to parse " + contacts_path + ": " + e.what());
    }
    const auto& arr = j.is_array() ? j : j.at("contacts");
    for (const auto& c : arr) {
      last_vertex = {c[0].get<double>(), c[1].get<double>(),
                     c[2].get<double>()};
    }
  }

  const PolarCoords polar{length, elevation, azimuth};
  const Vec3 rel = forward_position(polar, Vec3{});
  const Vec3 abs = forward_position(polar, last_vertex);
  out << "relative to last vertex: " << rel.x << " " << rel.y << " " << rel.z
      << "\n";
  out << "position: " << abs.x << " " << abs.y << " " << abs.z << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Risk-aware viewpoint planning and tethered flight "
               "simulation"};
  app.require_subcommand(1);

  std::string scenario_path, plan_path, out_flag, contacts_path;
  std::optional<std::uint64_t> seed;
  bool plot = false;
  double length = 0.0, elevation = 0.0, azimuth = 0.0;
  std::vector<double> anchor{0.0, 0.0, 0.0};
  std::vector<std::string> batch_scenarios;

  CLI::App* plan_cmd = app.add_subcommand("plan", "compute a plan");
  plan_cmd->add_option("--scenario", scenario_path, "scenario file")
      ->required();
  plan_cmd->add_option("--out", out_flag, "output directory");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "execute a plan");
  sim_cmd->add_option("--scenario", scenario_path, "scenario file")
      ->required();
  sim_cmd->add_option("--plan", plan_path, "plan file")->required();
  sim_cmd->add_option("--seed", seed, "noise seed override");
  sim_cmd->add_flag("--plot", plot, "write an SVG slice plot");
  sim_cmd->add_option("--out", out_flag, "output directory");

  CLI::App* loc_cmd =
      app.add_subcommand("localize", "polar to Cartesian position");
  loc_cmd->add_option("--length", length, "cord length, m")->required();
  loc_cmd->add_option("--elevation", elevation, "elevation, rad")->required();
  loc_cmd->add_option("--azimuth", azimuth, "azimuth, rad")->required();
  loc_cmd->add_option("--anchor", anchor, "reel anchor x y z")
      ->expected(3);
  loc_cmd->add_option("--contacts", contacts_path,
                      "JSON file with the contact stack");

  CLI::App* batch_cmd =
      app.add_subcommand("batch", "plan + simulate several scenarios");
  batch_cmd->add_option("--scenario", batch_scenarios, "scenario file(s)")
      ->required();
  batch_cmd->add_option("--seed", seed, "noise seed override");
  batch_cmd->add_flag("--plot", plot, "write SVG slice plots");
  batch_cmd->add_option("--out", out_flag, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (plan_cmd->parsed()) {
      return cmd_plan(out, err, scenario_path, out_flag);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(out, err, scenario_path, plan_path, seed, plot,
                          out_flag);
    }
    if (loc_cmd->parsed()) {
      return cmd_localize(out, length, elevation, azimuth, anchor,
                          contacts_path);
    }
    if (batch_cmd->parsed()) {
      for (const std::string& sp : batch_scenarios) {
        const int rc = cmd_plan(out, err, sp, out_flag);
        if (rc != 0) return rc;
        const Scenario scenario = load_scenario(sp);
        const auto dir = resolve_out_dir(scenario, out_flag);
        const auto pp = dir / (scenario.name + ".plan.json");
        const int rc2 = cmd_simulate(out, err, sp, pp.string(), seed, plot,
                                     out_flag);
        if (rc2 != 0) return rc2;
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tetherplan
