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

#include "tetherplan/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tetherplan {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open file: " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("failed to parse " + path.string() + ": " + e.what());
  }
}

void expect_schema(const json& j, const std::string& tag,
                   const std::filesystem::path& path) {
  if (!j.contains("schema") || j.at("schema") != tag) {
    throw ConfigError(path.string() + ": expected schema \"" + tag + "\"");
  }
}

template <typename T>
T get_required(const json& j, const std::string& key,
               const std::filesystem::path& path) {
  if (!j.contains(key)) {
    throw ConfigError(path.string() + ": missing required field \"" + key +
                      "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": bad field \"" + key + "\": " +
                      e.what());
  }
}

Vec3 to_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError("expected [x, y, z] triple");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Cell to_cell(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError("expected [x, y, z] cell triple");
  }
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

json from_vec3(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json from_cell(const Cell& c) { return json::array({c.x, c.y, c.z}); }

json breakdown_to_json(const RiskBreakdown& b) {
  return {{"distance", b.distance},
          {"visibility", b.visibility},
          {"altitude", b.altitude},
          {"singularity", b.singularity},
          {"action_length", b.action_length},
          {"access", b.access},
          {"tortuosity", b.tortuosity},
          {"tether_length", b.tether_length},
          {"contacts", b.contact_count},
          {"azimuth", b.azimuth_sweep}};
}

RiskWeights weights_from_json(const json& j) {
  RiskWeights w;
  if (j.contains("weights")) {
    const json& ws = j.at("weights");
    w.w_distance = ws.value("distance", w.w_distance);
    w.w_visibility = ws.value("visibility", w.w_visibility);
    w.w_altitude = ws.value("altitude", w.w_altitude);
    w.w_singularity = ws.value("singularity", w.w_singularity);
    w.w_action_length = ws.value("action_length", w.w_action_length);
    w.w_access = ws.value("access", w.w_access);
    w.w_tortuosity = ws.value("tortuosity", w.w_tortuosity);
    w.w_tether_length = ws.value("tether_length", w.w_tether_length);
    w.w_contacts = ws.value("contacts", w.w_contacts);
    w.w_azimuth = ws.value("azimuth", w.w_azimuth);
  }
  if (j.contains("params")) {
    const json& p = j.at("params");
    w.d_safe = p.value("d_safe", w.d_safe);
    w.h_min = p.value("h_min", w.h_min);
    if (p.contains("theta_sing_deg")) {
      w.theta_sing = radians(p.at("theta_sing_deg").get<double>());
    }
    w.l_max = p.value("l_max", w.l_max);
  }
  w.validate();
  return w;
}

}  // namespace

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

WorldFile load_world(const std::filesystem::path& path) {
  const json j = parse_file(path);
  expect_schema(j, "tetherplan-world-v1", path);

  GridWorldParams params;
  const json dims = get_required<json>(j, "dims", path);
  params.dims = to_cell(dims);
  params.cell_size = get_required<double>(j, "cell_size", path);

  if (j.contains("occupied")) {
    for (const auto& c : j.at("occupied")) {
      params.occupied.push_back(to_cell(c));
    }
  }
  if (j.contains("boxes")) {
    for (const auto& b : j.at("boxes")) {
      const Cell lo = to_cell(b.at("min"));
      const Cell hi = to_cell(b.at("max"));
      for (int x = lo.x; x <= hi.x; ++x) {
        for (int y = lo.y; y <= hi.y; ++y) {
          for (int z = lo.z; z <= hi.z; ++z) {
            params.occupied.push_back({x, y, z});
          }
        }
      }
    }
  }
  if (j.contains("voids")) {
    for (const auto& v : j.at("voids")) {
      if (!v.is_array() || v.size() != 4) {
        throw ConfigError(path.string() +
                          ": void label entries are [x, y, z, id]");
      }
      params.void_labels.emplace_back(
          Cell{v[0].get<int>(), v[1].get<int>(), v[2].get<int>()},
          v[3].get<int>());
    }
  }
  if (j.contains("access")) {
    for (const auto& a : j.at("access")) {
      params.access.push_back({a.at("from").get<int>(), a.at("to").get<int>(),
                               a.at("difficulty").get<double>()});
    }
  }

  WorldFile world;
  world.name = j.value("name", path.stem().string());
  world.grid = std::make_shared<GridWorld>(std::move(params));
  world.anchor = to_vec3(get_required<json>(j, "anchor", path));
  for (const auto& a : get_required<json>(j, "affordances", path)) {
    AffordanceSpec spec;
    spec.name = a.at("name").get<std::string>();
    spec.pose.center = to_vec3(a.at("center"));
    spec.pose.forward = to_vec3(a.at("forward"));
    spec.pose.radius = a.at("radius").get<double>();
    world.affordances.push_back(std::move(spec));
  }
  return world;
}

ScoreFile load_scores(const std::filesystem::path& path) {
  const json j = parse_file(path);
  expect_schema(j, "tetherplan-scores-v1", path);
  ScoreFile scores;
  scores.affordance = get_required<std::string>(j, "affordance", path);
  scores.metrics = get_required<std::vector<double>>(j, "metrics", path);
  return scores;
}

RiskWeights load_weights(const std::filesystem::path& path) {
  const json j = parse_file(path);
  expect_schema(j, "tetherplan-weights-v1", path);
  try {
    return weights_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  const json j = parse_file(path);
  expect_schema(j, "tetherplan-scenario-v1", path);
  const std::filesystem::path dir = path.parent_path();

  Scenario s;
  s.name = j.value("name", path.stem().string());
  s.world = load_world(dir / get_required<std::string>(j, "world", path));

  const auto scores_path = dir / get_required<std::string>(j, "scores", path);
  const ScoreFile scores = load_scores(scores_path);
  const AffordanceSpec* spec = nullptr;
  for (const AffordanceSpec& a : s.world.affordances) {
    if (a.name == scores.affordance) {
      spec = &a;
      break;
    }
  }
  if (spec == nullptr) {
    throw ConfigError(scores_path.string() + ": affordance \"" +
                      scores.affordance + "\" not present in world file");
  }
  s.affordance_name = spec->name;
  s.reward_map =
      std::make_shared<ViewpointQualityMap>(spec->pose, scores.metrics);

  if (j.contains("weights") && j.at("weights").is_string()) {
    s.weights = load_weights(dir / j.at("weights").get<std::string>());
  } else if (j.contains("weights")) {
    // Inline object with the same layout as the weights file.
    s.weights = weights_from_json(j.at("weights"));
  }

  s.start = to_cell(get_required<json>(j, "start", path));
  if (!s.world.grid->is_free(s.start)) {
    throw ConfigError(path.string() + ": start cell is not free");
  }

  if (j.contains("planner")) {
    const json& p = j.at("planner");
    s.planner.utility_regularizer =
        p.value("utility_regularizer", s.planner.utility_regularizer);
    s.planner.label_budget = p.value("label_budget", s.planner.label_budget);
    s.planner.require_poi_los =
        p.value("require_poi_los", s.planner.require_poi_los);
    s.planner.accumulate_reward =
        p.value("accumulate_reward", s.planner.accumulate_reward);
    s.planner.reward_discount =
        p.value("reward_discount", s.planner.reward_discount);
    s.planner.strict_dominance =
        p.value("strict_dominance", s.planner.strict_dominance);
    s.planner.validate();
  }

  if (j.contains("controller")) {
    const json& c = j.at("controller");
    ChannelGains g;
    g.kp = c.value("kp", g.kp);
    g.ki = c.value("ki", g.ki);
    g.kd = c.value("kd", g.kd);
    g.integral_limit = c.value("integral_limit", g.integral_limit);
    s.controller.length = g;
    s.controller.elevation = g;
    s.controller.azimuth = g;
    s.controller.max_length_rate =
        c.value("max_length_rate", s.controller.max_length_rate);
    s.controller.max_angle_rate =
        c.value("max_angle_rate", s.controller.max_angle_rate);
    s.controller.min_cos_elevation =
        c.value("min_cos_elevation", s.controller.min_cos_elevation);
    s.controller.cruise_speed =
        c.value("cruise_speed", s.controller.cruise_speed);
    s.controller.validate();
  }

  if (j.contains("sim")) {
    const json& c = j.at("sim");
    s.sim.dt = c.value("dt", s.sim.dt);
    if (c.contains("primitive")) {
      const std::string p = c.at("primitive").get<std::string>();
      if (p == "position") {
        s.sim.primitive = Primitive::kPosition;
      } else if (p == "velocity") {
        s.sim.primitive = Primitive::kVelocity;
      } else {
        throw ConfigError(path.string() +
                          ": primitive must be \"position\" or \"velocity\"");
      }
    }
    s.sim.waypoint_tolerance =
        c.value("waypoint_tolerance", s.sim.waypoint_tolerance);
    s.sim.max_steps = c.value("max_steps", s.sim.max_steps);
    s.sim.noise_sigma = c.value("noise_sigma", s.sim.noise_sigma);
    s.sim.seed = c.value("seed", s.sim.seed);
    s.sim.validate();
  }
  s.sim.require_poi_los = s.planner.require_poi_los;

  s.out_dir = j.value("out_dir", std::string("out"));
  return s;
}

void atomic_write(const std::filesystem::path& path,
                  const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out << content;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_plan_file(const std::filesystem::path& path,
                     const PlanResult& plan, const Scenario& scenario) {
  const GridWorld& world = *scenario.world.grid;
  json j;
  j["schema"] = "tetherplan-plan-v1";
  j["scenario"] = scenario.name;
  j["world_hash"] = hash_hex(world.content_hash());
  j["utility"] = plan.utility;
  j["terminal_reward"] = plan.terminal_reward;
  j["risk_total"] = plan.total_risk;
  j["risk_breakdown"] = breakdown_to_json(plan.breakdown);

  // Per-waypoint increments re-derived from the stored path.
  const RiskAccumulator acc(world, scenario.weights);
  json waypoints = json::array();
  json contact_events = json::array();
  RiskBreakdown prev_b;
  std::optional<Vec3> prev_action;
  int prev_contacts = 0;
  for (std::size_t i = 0; i < plan.path.size(); ++i) {
    const PathState& s = plan.path.states[i];
    RiskBreakdown b;
    if (i == 0) {
      b = acc.start(s);
    } else {
      b = acc.extend(prev_b, plan.path.states[i - 1], prev_action, s);
      prev_action = s.position - plan.path.states[i - 1].position;
    }
    json inc;
    const auto be = b.elements();
    const auto pe = prev_b.elements();
    static const char* kNames[10] = {
        "distance",   "visibility",    "altitude", "singularity",
        "action_length", "access",     "tortuosity", "tether_length",
        "contacts",   "azimuth"};
    for (int k = 0; k < 10; ++k) {
      inc[kNames[k]] = i == 0 ? be[k] : be[k] - pe[k];
    }
    json contacts = json::array();
    for (const Vec3& cp : s.tether.contacts()) contacts.push_back(from_vec3(cp));
    waypoints.push_back({{"cell", from_cell(s.cell)},
                         {"position", from_vec3(s.position)},
                         {"risk_increment", inc},
                         {"contacts", contacts}});
    const int n = s.tether.contact_count();
    for (int k = prev_contacts; k < n; ++k) {
      contact_events.push_back(
          {{"waypoint", i},
           {"event", "push"},
           {"point", from_vec3(s.tether.contacts()[k])}});
    }
    for (int k = n; k < prev_contacts; ++k) {
      contact_events.push_back({{"waypoint", i}, {"event", "pop"}});
    }
    prev_contacts = n;
    prev_b = b;
  }
  j["waypoints"] = waypoints;
  j["contact_events"] = contact_events;
  json terminal = json::array();
  for (const Vec3& cp : plan.path.states.back().tether.contacts()) {
    terminal.push_back(from_vec3(cp));
  }
  j["terminal_contacts"] = terminal;

  atomic_write(path, j.dump(2) + "\n");
}

PlanResult read_plan_file(const std::filesystem::path& path,
                          const Scenario& scenario) {
  const json j = parse_file(path);
  expect_schema(j, "tetherplan-plan-v1", path);
  const GridWorld& world = *scenario.world.grid;

  const std::string stored_hash =
      get_required<std::string>(j, "world_hash", path);
  if (stored_hash != hash_hex(world.content_hash())) {
    throw ConfigError(path.string() +
                      ": world hash mismatch; plan was computed for a "
                      "different world");
  }

  std::vector<Cell> cells;
  for (const auto& w : get_required<json>(j, "waypoints", path)) {
    cells.push_back(to_cell(w.at("cell")));
  }
  PlanResult plan;
  plan.path = make_path(world, scenario.world.anchor, cells);
  plan.breakdown = path_risk(plan.path, world, scenario.weights);
  plan.total_risk = plan.breakdown.total(scenario.weights);
  plan.terminal_reward = get_required<double>(j, "terminal_reward", path);
  plan.utility = get_required<double>(j, "utility", path);

  const double stored_risk = get_required<double>(j, "risk_total", path);
  if (std::abs(stored_risk - plan.total_risk) > 1e-9) {
    throw ConfigError(path.string() +
                      ": stored risk does not match replayed path risk");
  }
  return plan;
}

void write_metrics_file(const std::filesystem::path& path, const Metrics& m) {
  json j;
  j["schema"] = "tetherplan-metrics-v1";
  j["reward_collected"] = m.reward_collected;
  j["risk_encountered"] = m.risk_encountered;
  j["planned_risk"] = m.planned_risk;
  j["risk_delta_fraction"] =
      m.planned_risk > 0.0
          ? std::abs(m.risk_encountered - m.planned_risk) / m.planned_risk
          : 0.0;
  j["flight_accuracy"] = m.flight_accuracy;
  j["contacts_peak"] = m.contacts_peak;
  j["steps"] = m.steps;
  atomic_write(path, j.dump(2) + "\n");
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<LogRow>& log) {
  std::ostringstream out;
  out.precision(17);
  out << "step,t,x,y,z,L,theta_eff,phi_eff,n_contacts,static_len,yaw,pitch,"
         "waypoint_idx\n";
  for (const LogRow& r : log) {
    out << r.step << ',' << r.t << ',' << r.position.x << ',' << r.position.y
        << ',' << r.position.z << ',' << r.total_length << ','
        << r.elevation_eff << ',' << r.azimuth_eff << ',' << r.n_contacts
        << ',' << r.static_length << ',' << r.yaw << ',' << r.pitch << ','
        << r.waypoint_idx << '\n';
  }
  atomic_write(path, out.str());
}

}  // namespace tetherplan
