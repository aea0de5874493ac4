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

#include <cstddef>

#include "tetherplan/grid_world.hpp"
#include "tetherplan/reward.hpp"
#include "tetherplan/risk.hpp"

namespace tetherplan {

struct PlannerConfig {
  // Utility denominator regularizer: utility = reward / (risk + this).
  double utility_regularizer = 1.0;
  // Hard cap on created search labels; the search errors out on exhaustion.
  std::size_t label_budget = 200000;
  // Zero the reward of viewpoints without line of sight to the point of
  // interest.
  bool require_poi_los = false;
  // Score plans by discounted reward summed along the path instead of the
  // terminal viewpoint only.
  bool accumulate_reward = false;
  double reward_discount = 0.95;
  // Additionally require a dominating label's visited-cell set to be a
  // subset of the dominated one's. Slower, but immune to the corner case
  // where the dominating prefix blocks the optimal continuation.
  bool strict_dominance = false;

  void validate() const;
};

struct PlanResult {
  Path path;
  RiskBreakdown breakdown;
  double total_risk = 0.0;
  double terminal_reward = 0.0;
  double utility = 0.0;
};

// Risk-aware, reward-maximizing plan: label-correcting search over
// 26-connected free cells, where a label is (cell, incoming direction,
// tether contact signature) plus the element-wise risk accumulated along its
// path prefix. Each reached cell is scored by the viewpoint quality over the
// minimum risk of getting there; the max-utility path wins, with ties broken
// by lower risk and then lexicographic cell order. When no reachable cell
// has positive reward, the zero-length path at the start is returned.
PlanResult plan(const GridWorld& world, const ViewpointQualityMap& reward,
                const RiskWeights& weights, Cell start, const Vec3& anchor,
                const PlannerConfig& config = {});

// Exact oracle: enumerates every simple path from start (bounded worlds
// only), replaying tether updates, and returns the max-utility result.
// Throws ConfigError when the world has more than max_states free cells.
PlanResult brute_force_plan(const GridWorld& world,
                            const ViewpointQualityMap& reward,
                            const RiskWeights& weights, Cell start,
                            const Vec3& anchor, std::size_t max_states = 40,
                            const PlannerConfig& config = {});

// Minimum-total-risk path from start to goal. Throws when the goal is
// unreachable.
Path min_risk_to(const GridWorld& world, const RiskWeights& weights,
                 Cell start, const Vec3& anchor, Cell goal,
                 const PlannerConfig& config = {});

}  // namespace tetherplan
