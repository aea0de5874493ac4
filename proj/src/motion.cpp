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

#include "tetherplan/motion.hpp"

#include <algorithm>
#include <cmath>

namespace tetherplan {

void ControllerConfig::validate() const {
  for (const ChannelGains* g : {&length, &elevation, &azimuth}) {
    if (!(g->kp >= 0.0) || !(g->ki >= 0.0) || !(g->kd >= 0.0)) {
      throw ConfigError("PID gains must be non-negative");
    }
    if (!(g->integral_limit > 0.0)) {
      throw ConfigError("integral limit must be positive");
    }
  }
  if (!(max_length_rate > 0.0) || !(max_angle_rate > 0.0)) {
    throw ConfigError("rate clamps must be positive");
  }
  if (!(min_cos_elevation > 0.0) || !(cruise_speed > 0.0)) {
    throw ConfigError("controller thresholds must be positive");
  }
}

PositionController::PositionController(const ControllerConfig& config)
    : config_(config) {
  config_.validate();
}

void PositionController::reset() {
  length_ = {};
  elevation_ = {};
  azimuth_ = {};
}

double PositionController::run_channel(const ChannelGains& g, ChannelState& s,
                                       double error, double dt) {
  if (!s.primed) {
    s.prev_error = error;  // no derivative kick on the first step
    s.primed = true;
  }
  s.integral = std::clamp(s.integral + error * dt, -g.integral_limit,
                          g.integral_limit);
  const double derivative = (error - s.prev_error) / dt;
  s.prev_error = error;
  return g.kp * error + g.ki * s.integral + g.kd * derivative;
}

RateCommand PositionController::step(const PolarCoords& current,
                                     const Vec3& target,
                                     const Vec3& frame_origin, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const PolarCoords t = inverse_position(target, frame_origin);
  RateCommand cmd;
  cmd.length_rate =
      run_channel(config_.length, length_, t.length - current.length, dt);
  cmd.elevation_rate = run_channel(config_.elevation, elevation_,
                                   t.elevation - current.elevation, dt);
  cmd.azimuth_rate = run_channel(config_.azimuth, azimuth_,
                                 wrap_angle(t.azimuth - current.azimuth), dt);
  cmd.length_rate = std::clamp(cmd.length_rate, -config_.max_length_rate,
                               config_.max_length_rate);
  cmd.elevation_rate = std::clamp(cmd.elevation_rate, -config_.max_angle_rate,
                                  config_.max_angle_rate);
  cmd.azimuth_rate = std::clamp(cmd.azimuth_rate, -config_.max_angle_rate,
                                config_.max_angle_rate);
  return cmd;
}

RateCommand velocity_command(const PolarCoords& current, const Vec3& v_des,
                             const ControllerConfig& config) {
  if (current.length < config.min_length) {
    throw SingularityError("tether singularity: zero length");
  }
  if (std::abs(std::cos(current.elevation)) < config.min_cos_elevation) {
    throw SingularityError("tether singularity");
  }
  const Mat3 j = tether_jacobian(current);
  const Vec3 rates = solve3(j, v_des);
  // Guard the solve quality; away from the pole this is far below 1e-10.
  const Vec3 residual = mat_apply(j, rates) - v_des;
  if (residual.norm() > 1e-10 * std::max(v_des.norm(), 1e-30)) {
    throw SingularityError("tether singularity: ill-conditioned solve");
  }
  return {rates.x, rates.y, rates.z};
}

GimbalCommand gimbal_pointing(const Vec3& uav, const Vec3& poi,
                              double previous_yaw) {
  const Vec3 d = poi - uav;
  if (d.norm() == 0.0) {
    throw Error("gimbal target coincides with vehicle");
  }
  GimbalCommand cmd;
  const double h = d.horizontal_norm();
  if (h < 1e-12) {
    cmd.vehicle_yaw = previous_yaw;
    cmd.camera_pitch = d.y > 0.0 ? kPi / 2.0 : -kPi / 2.0;
  } else {
    cmd.vehicle_yaw = std::atan2(d.x, d.z);
    cmd.camera_pitch = std::atan2(d.y, h);
  }
  cmd.camera_roll = 0.0;
  return cmd;
}

Vec3 optical_axis(const GimbalCommand& cmd) {
  const double cp = std::cos(cmd.camera_pitch);
  return {cp * std::sin(cmd.vehicle_yaw), std::sin(cmd.camera_pitch),
          cp * std::cos(cmd.vehicle_yaw)};
}

}  // namespace tetherplan
