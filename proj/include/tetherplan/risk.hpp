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

#include <array>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/grid_world.hpp"
#include "tetherplan/tether.hpp"

namespace tetherplan {

// Weights for the ten risk elements plus the normalization parameters of the
// state-dependent terms. All weights must be non-negative and all parameters
// positive.
struct RiskWeights {
  // state-dependent
  double w_distance = 1.0;
  double w_visibility = 1.0;
  double w_altitude = 1.0;
  double w_singularity = 1.0;
  // path-dependent
  double w_action_length = 1.0;
  double w_access = 1.0;
  double w_tortuosity = 1.0;
  double w_tether_length = 1.0;
  double w_contacts = 1.0;
  double w_azimuth = 1.0;

  double d_safe = 1.0;                    // m, obstacle standoff
  double h_min = 0.4;                     // m, ceiling/ground clearance
  double theta_sing = radians(75.0);      // rad, elevation risk knee
  double l_max = 10.0;                    // m, tether length normalizer

  void validate() const;
};

// The four state-dependent risk terms, each normalized into [0, 1].
struct StateRiskTerms {
  double distance = 0.0;
  double visibility = 0.0;
  double altitude = 0.0;
  double singularity = 0.0;
};

// Unweighted per-element totals accumulated over a path. Every element is
// non-decreasing under path extension, so any weighted combination is too.
struct RiskBreakdown {
  // sums of state-dependent terms
  double distance = 0.0;
  double visibility = 0.0;
  double altitude = 0.0;
  double singularity = 0.0;
  // path-dependent elements
  double action_length = 0.0;  // total traveled length
  double access = 0.0;         // positive part of region-crossing difficulty
  double tortuosity = 0.0;     // norm of consecutive action differences
  double tether_length = 0.0;  // per-state total cord length / l_max
  double contact_count = 0.0;  // per-state environment contact count
  double azimuth_sweep = 0.0;  // accumulated effective-azimuth motion

  double total(const RiskWeights& w) const;
  std::array<double, 10> elements() const;
  // True when o is element-wise <= *this.
  bool dominated_by(const RiskBreakdown& o) const;
};

// One path state: occupancy cell, continuous position inside it, and the
// tether configuration reached there.
struct PathState {
  Cell cell;
  Vec3 position;
  TetherState tether;
};

struct Path {
  std::vector<PathState> states;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
};

// Simple (no repeated cells), collision-free, 26-adjacent consecutive cells.
// Throws ConfigError on violation.
void validate_path(const Path& path, const GridWorld& world);

// Builds a path through the given cells, replaying the tether contact
// updates from an initial straight cord anchor->start.
Path make_path(const GridWorld& world, const Vec3& anchor,
               const std::vector<Cell>& cells);

// State-dependent risk terms at one path state.
StateRiskTerms state_risk(const PathState& s, const GridWorld& world,
                          const RiskWeights& w);

// Incremental risk evaluator. Caches the position-only terms per cell, so
// repeated expansion of the same cell during search stays cheap.
class RiskAccumulator {
 public:
  RiskAccumulator(const GridWorld& world, const RiskWeights& weights);

  // Breakdown of the single-state path {s0}.
  RiskBreakdown start(const PathState& s0) const;

  // Breakdown of prefix ++ next, where prev is the prefix's last state and
  // prev_action its last action (nullopt for a single-state prefix).
  RiskBreakdown extend(const RiskBreakdown& prefix, const PathState& prev,
                       const std::optional<Vec3>& prev_action,
                       const PathState& next) const;

  const RiskWeights& weights() const { return weights_; }

 private:
  StateRiskTerms terms_at(const PathState& s) const;

  const GridWorld& world_;
  RiskWeights weights_;
  struct CellTerms {
    double distance, visibility, altitude;
  };
  mutable std::unordered_map<std::size_t, CellTerms> cell_cache_;
};

// Full-path evaluation: accumulates over the states in order. The tether
// snapshots stored in the path are trusted; use make_path to build them.
RiskBreakdown path_risk(const Path& path, const GridWorld& world,
                        const RiskWeights& weights);

}  // namespace tetherplan
