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

#include <cstdint>
#include <vector>

#include "tetherplan/motion.hpp"
#include "tetherplan/planner.hpp"

namespace tetherplan {

enum class Primitive { kPosition, kVelocity };

struct SimConfig {
  double dt = 0.05;             // s
  Primitive primitive = Primitive::kPosition;
  double waypoint_tolerance = 0.05;  // m
  int max_steps = 20000;
  double noise_sigma = 0.0;     // m, per-axis position noise
  std::uint64_t seed = 0;
  bool require_poi_los = false;  // reward semantics for the metrics

  void validate() const;
};

// One trajectory log row, written after each integration step.
struct LogRow {
  int step = 0;
  double t = 0.0;
  Vec3 position;
  double total_length = 0.0;
  double elevation_eff = 0.0;
  double azimuth_eff = 0.0;
  int n_contacts = 0;
  double static_length = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;
  int waypoint_idx = 0;
};

struct Metrics {
  double reward_collected = 0.0;
  double risk_encountered = 0.0;  // re-accumulated along the executed cells
  double flight_accuracy = 0.0;   // RMS cross-track error to the plan, m
  int contacts_peak = 0;
  int steps = 0;
  double planned_risk = 0.0;      // copied from the plan for comparison
};

struct SimResult {
  std::vector<LogRow> log;
  Metrics metrics;
  TetherState final_tether;
  // Tether state after each step, aligned with log. Not serialized; used by
  // analysis and tests.
  std::vector<TetherState> tether_trace;
};

// Executes a plan waypoint-by-waypoint with the selected motion primitive on
// straight-cord point-mass kinematics. Each step computes a rate command,
// integrates it, clamps the Cartesian step to one cell, updates the tether
// contacts, and asserts tether feasibility. Deterministic for a fixed seed
// and config. Errors carry the failing step index.
SimResult simulate(const PlanResult& plan, const GridWorld& world,
                   const ViewpointQualityMap& reward_map,
                   const RiskWeights& weights, const SimConfig& config,
                   const ControllerConfig& gains);

}  // namespace tetherplan
