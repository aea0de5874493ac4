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

#include "tetherplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace tetherplan {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("sim dt must be positive");
  if (!(waypoint_tolerance > 0.0)) {
    throw ConfigError("waypoint tolerance must be positive");
  }
  if (max_steps <= 0) throw ConfigError("max_steps must be positive");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise sigma must be >= 0");
}

namespace {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

double distance_to_polyline(const Vec3& p, const std::vector<Vec3>& pts) {
  double best = (p - pts.front()).norm();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    best = std::min(best, point_segment_distance(p, pts[i], pts[i + 1]));
  }
  return best;
}

[[noreturn]] void rethrow_with_step(const Error& e, int step) {
  const std::string msg = std::string(e.what()) + " (step " +
                          std::to_string(step) + ")";
  if (dynamic_cast<const SingularityError*>(&e)) throw SingularityError(msg);
  if (dynamic_cast<const TetherInfeasibleError*>(&e)) {
    throw TetherInfeasibleError(msg);
  }
  if (dynamic_cast<const CollisionError*>(&e)) throw CollisionError(msg);
  throw Error(msg);
}

}  // namespace

SimResult simulate(const PlanResult& plan, const GridWorld& world,
                   const ViewpointQualityMap& reward_map,
                   const RiskWeights& weights, const SimConfig& config,
                   const ControllerConfig& gains) {
  config.validate();
  gains.validate();
  if (plan.path.empty()) throw ConfigError("plan has no waypoints");
  validate_path(plan.path, world);

  std::vector<Vec3> waypoints;
  waypoints.reserve(plan.path.size());
  for (const PathState& s : plan.path.states) waypoints.push_back(s.position);

  TetherState tether = plan.path.states.front().tether;
  Vec3 pos = waypoints.front();
  const Vec3 poi = reward_map.pose().center;

  PositionController controller(gains);
  CameraTracker camera;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const RiskAccumulator acc(world, weights);
  PathState exec_state{world.cell_at(pos), pos, tether};
  RiskBreakdown exec_risk = acc.start(exec_state);
  std::optional<Vec3> exec_action;

  SimResult result{.log = {}, .metrics = {}, .final_tether = tether};
  result.metrics.planned_risk = plan.total_risk;
  int contacts_peak = tether.contact_count();

  std::size_t wp_idx = 1;
  int step = 0;
  double cross_track_sq = 0.0;

  while (wp_idx < waypoints.size()) {
    if (step >= config.max_steps) {
      throw Error("max steps exceeded (step " + std::to_string(step) + ")");
    }
    const Vec3& target = waypoints[wp_idx];
    const Vec3 frame = tether.last_vertex();
    const PolarCoords polar = tether.effective_controls();

    RateCommand rates;
    try {
      if (config.primitive == Primitive::kPosition) {
        rates = controller.step(polar, target, frame, config.dt);
      } else {
        const Vec3 delta = target - pos;
        const double dist = delta.norm();
        Vec3 v_des{};
        if (dist > 1e-12) {
          const double speed = std::min(dist / config.dt, gains.cruise_speed);
          v_des = delta * (speed / dist);
        }
        rates = velocity_command(polar, v_des, gains);
        rates.length_rate = std::clamp(rates.length_rate,
                                       -gains.max_length_rate,
                                       gains.max_length_rate);
        rates.elevation_rate = std::clamp(rates.elevation_rate,
                                          -gains.max_angle_rate,
                                          gains.max_angle_rate);
        rates.azimuth_rate = std::clamp(rates.azimuth_rate,
                                        -gains.max_angle_rate,
                                        gains.max_angle_rate);
      }
    } catch (const Error& e) {
      rethrow_with_step(e, step);
    }

    PolarCoords next_polar;
    next_polar.length = std::max(0.0, polar.length +
                                          rates.length_rate * config.dt);
    next_polar.elevation =
        std::clamp(polar.elevation + rates.elevation_rate * config.dt,
                   -kPi / 2.0, kPi / 2.0);
    next_polar.azimuth =
        wrap_angle(polar.azimuth + rates.azimuth_rate * config.dt);
    Vec3 new_pos = forward_position(next_polar, frame);

    const Vec3 motion = new_pos - pos;
    const double motion_len = motion.norm();
    if (motion_len > world.cell_size()) {
      new_pos = pos + motion * (world.cell_size() / motion_len);
    }
    if (config.noise_sigma > 0.0) {
      new_pos += Vec3{noise(rng), noise(rng), noise(rng)} *
                 config.noise_sigma;
    }

    try {
      tether = tether_step(tether, new_pos, world);
      if (!tether_feasible(tether, world)) {
        throw TetherInfeasibleError("tether polyline in collision");
      }
    } catch (const Error& e) {
      rethrow_with_step(e, step);
    }
    pos = new_pos;

    const GimbalCommand gimbal = camera.point_at(pos, poi);
    contacts_peak = std::max(contacts_peak, tether.contact_count());

    // Re-accumulate risk whenever the vehicle enters a different cell.
    const Cell cell_now = world.cell_at(pos);
    if (cell_now != exec_state.cell) {
      PathState next_state{cell_now, pos, tether};
      exec_risk = acc.extend(exec_risk, exec_state, exec_action, next_state);
      exec_action = next_state.position - exec_state.position;
      exec_state = std::move(next_state);
    }

    cross_track_sq += std::pow(distance_to_polyline(pos, waypoints), 2);

    const PolarCoords eff = tether.effective_controls();
    result.log.push_back({.step = step,
                          .t = (step + 1) * config.dt,
                          .position = pos,
                          .total_length = tether.total_length(),
                          .elevation_eff = eff.elevation,
                          .azimuth_eff = eff.azimuth,
                          .n_contacts = tether.contact_count(),
                          .static_length = tether.static_length(),
                          .yaw = gimbal.vehicle_yaw,
                          .pitch = gimbal.camera_pitch,
                          .waypoint_idx = static_cast<int>(wp_idx)});
    result.tether_trace.push_back(tether);
    ++step;

    while (wp_idx < waypoints.size() &&
           (pos - waypoints[wp_idx]).norm() <= config.waypoint_tolerance) {
      ++wp_idx;
      controller.reset();
    }
  }

  result.final_tether = tether;
  result.metrics.steps = step;
  result.metrics.contacts_peak = contacts_peak;
  result.metrics.risk_encountered = exec_risk.total(weights);
  result.metrics.flight_accuracy =
      step > 0 ? std::sqrt(cross_track_sq / step) : 0.0;
  result.metrics.reward_collected =
      effective_quality(pos, reward_map, world, config.require_poi_los);
  return result;
}

}  // namespace tetherplan
