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

#pragma once

#include "tetherplan/geometry.hpp"

namespace tetherplan {

struct ChannelGains {
  double kp = 1.2;
  double ki = 0.0;
  double kd = 0.1;
  double integral_limit = 1.0;
};

struct ControllerConfig {
  ChannelGains length;
  ChannelGains elevation;
  ChannelGains azimuth;
  double max_length_rate = 1.0;   // m/s
  double max_angle_rate = 0.8;    // rad/s
  // Velocity control refuses to solve when |cos(elevation)| drops below
  // this, i.e. when |det J| < min_cos_elevation * L^2.
  double min_cos_elevation = 1e-3;
  double min_length = 1e-6;       // m
  double cruise_speed = 1.0;      // m/s, velocity primitive setpoint

  void validate() const;
};

// Rate command in tether coordinates.
struct RateCommand {
  double length_rate = 0.0;     // m/s
  double elevation_rate = 0.0;  // rad/s
  double azimuth_rate = 0.0;    // rad/s
};

// Three independent PID loops driving length, elevation, and azimuth to the
// polar coordinates of a Cartesian target. The azimuth error is wrapped to
// (-pi, pi] so the loop always turns the short way. Holds integrator and
// derivative state; one instance per vehicle.
class PositionController {
 public:
  explicit PositionController(const ControllerConfig& config);

  // Rate command driving `current` toward `target` expressed relative to
  // frame_origin (the last tether vertex). Throws when target coincides
  // with the origin.
  RateCommand step(const PolarCoords& current, const Vec3& target,
                   const Vec3& frame_origin, double dt);

  void reset();

 private:
  struct ChannelState {
    double integral = 0.0;
    double prev_error = 0.0;
    bool primed = false;
  };
  double run_channel(const ChannelGains& g, ChannelState& s, double error,
                     double dt);

  ControllerConfig config_;
  ChannelState length_, elevation_, azimuth_;
};

// Rates that realize the Cartesian velocity v_des at the given tether
// coordinates, from solving the velocity Jacobian system. Throws
// SingularityError near the vertical pole or at near-zero length; the
// caller falls back to position control or replans.
RateCommand velocity_command(const PolarCoords& current, const Vec3& v_des,
                             const ControllerConfig& config = {});

// Vehicle yaw plus camera gimbal pitch; roll is passively gravity-aligned
// and always zero.
struct GimbalCommand {
  double vehicle_yaw = 0.0;   // rad, 0 along +z, pi/2 along +x
  double camera_pitch = 0.0;  // rad, in [-pi/2, pi/2]
  double camera_roll = 0.0;   // always 0
};

// Yaw/pitch that put the optical axis through poi. When poi is directly
// above or below, yaw keeps previous_yaw and pitch saturates to +-pi/2.
GimbalCommand gimbal_pointing(const Vec3& uav, const Vec3& poi,
                              double previous_yaw = 0.0);

// Stateful wrapper that carries the previous yaw across steps.
class CameraTracker {
 public:
  GimbalCommand point_at(const Vec3& uav, const Vec3& poi) {
    const GimbalCommand cmd = gimbal_pointing(uav, poi, last_yaw_);
    last_yaw_ = cmd.vehicle_yaw;
    return cmd;
  }

 private:
  double last_yaw_ = 0.0;
};

// Unit vector along the camera optical axis for a gimbal command.
Vec3 optical_axis(const GimbalCommand& cmd);

}  // namespace tetherplan
