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

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "tetherplan/motion.hpp"
#include "tetherplan/planner.hpp"
#include "tetherplan/sim.hpp"

namespace tetherplan {

// A named point of interest from the world file.
struct AffordanceSpec {
  std::string name;
  AffordancePose pose;
};

// Contents of a world file: the grid plus the tether reel anchor and the
// candidate points of interest.
struct WorldFile {
  std::string name;
  std::shared_ptr<const GridWorld> grid;
  Vec3 anchor;
  std::vector<AffordanceSpec> affordances;
};

struct ScoreFile {
  std::string affordance;        // must name an affordance in the world file
  std::vector<double> metrics;   // exactly 30, in hemisphere sample order
};

// Fully resolved scenario: validated configuration ready to plan/simulate.
struct Scenario {
  std::string name;
  WorldFile world;
  std::string affordance_name;
  std::shared_ptr<const ViewpointQualityMap> reward_map;
  RiskWeights weights;
  Cell start;
  PlannerConfig planner;
  ControllerConfig controller;
  SimConfig sim;
  std::filesystem::path out_dir;
};

WorldFile load_world(const std::filesystem::path& path);
ScoreFile load_scores(const std::filesystem::path& path);
RiskWeights load_weights(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

std::string hash_hex(std::uint64_t h);

// Plan file round trip. Reading replays the tether updates along the stored
// waypoints and cross-checks risk and utility against the stored values,
// and refuses plans whose world hash does not match.
void write_plan_file(const std::filesystem::path& path,
                     const PlanResult& plan, const Scenario& scenario);
PlanResult read_plan_file(const std::filesystem::path& path,
                          const Scenario& scenario);

void write_metrics_file(const std::filesystem::path& path, const Metrics& m);
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<LogRow>& log);

// Writes content to path via a temp file + rename, so failures never leave
// partial output behind.
void atomic_write(const std::filesystem::path& path,
                  const std::string& content);

}  // namespace tetherplan
