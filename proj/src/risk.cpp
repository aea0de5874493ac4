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

#include "tetherplan/risk.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

namespace tetherplan {

void RiskWeights::validate() const {
  for (double w : {w_distance, w_visibility, w_altitude, w_singularity,
                   w_action_length, w_access, w_tortuosity, w_tether_length,
                   w_contacts, w_azimuth}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("risk weights must be non-negative");
    }
  }
  if (!(d_safe > 0.0) || !(h_min > 0.0) || !(l_max > 0.0)) {
    throw ConfigError("risk parameters must be positive");
  }
  if (!(theta_sing > 0.0) || !(theta_sing < kPi / 2.0)) {
    throw ConfigError("theta_sing must lie in (0, pi/2)");
  }
}

double RiskBreakdown::total(const RiskWeights& w) const {
  return w.w_distance * distance + w.w_visibility * visibility +
         w.w_altitude * altitude + w.w_singularity * singularity +
         w.w_action_length * action_length + w.w_access * access +
         w.w_tortuosity * tortuosity + w.w_tether_length * tether_length +
         w.w_contacts * contact_count + w.w_azimuth * azimuth_sweep;
}

std::array<double, 10> RiskBreakdown::elements() const {
  return {distance,      visibility, altitude,      singularity,
          action_length, access,     tortuosity,    tether_length,
          contact_count, azimuth_sweep};
}

bool RiskBreakdown::dominated_by(const RiskBreakdown& o) const {
  const auto a = o.elements();
  const auto b = elements();
  for (int i = 0; i < 10; ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

void validate_path(const Path& path, const GridWorld& world) {
  if (path.empty()) throw ConfigError("path has no states");
  std::unordered_set<std::size_t> seen;
  const PathState* prev = nullptr;
  for (const PathState& s : path.states) {
    if (!world.is_free(s.cell)) {
      throw ConfigError("path state in collision");
    }
    if (!seen.insert(world.index(s.cell)).second) {
      throw ConfigError("path repeats a cell");
    }
    if (world.cell_at(s.position) != s.cell) {
      throw ConfigError("path state position outside its cell");
    }
    if (prev != nullptr) {
      const int dx = std::abs(s.cell.x - prev->cell.x);
      const int dy = std::abs(s.cell.y - prev->cell.y);
      const int dz = std::abs(s.cell.z - prev->cell.z);
      if (std::max({dx, dy, dz}) != 1) {
        throw ConfigError("consecutive path cells are not 26-adjacent");
      }
      if (!world.line_of_sight(prev->position, s.position)) {
        throw ConfigError("path segment clips an obstacle");
      }
    }
    prev = &s;
  }
}

Path make_path(const GridWorld& world, const Vec3& anchor,
               const std::vector<Cell>& cells) {
  if (cells.empty()) throw ConfigError("path has no states");
  // Check the cell sequence before replaying any tether updates.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!world.is_free(cells[i])) throw ConfigError("path state in collision");
    if (i > 0 && !world.line_of_sight(world.center(cells[i - 1]),
                                      world.center(cells[i]))) {
      throw ConfigError("path segment clips an obstacle");
    }
  }
  Path path;
  TetherState tether(anchor, world.center(cells.front()));
  path.states.push_back({cells.front(), world.center(cells.front()), tether});
  for (std::size_t i = 1; i < cells.size(); ++i) {
    tether = tether_step(tether, world.center(cells[i]), world);
    path.states.push_back({cells[i], world.center(cells[i]), tether});
  }
  validate_path(path, world);
  return path;
}

StateRiskTerms state_risk(const PathState& s, const GridWorld& world,
                          const RiskWeights& w) {
  StateRiskTerms t;
  const double d = world.distance_to_obstacle(s.position);
  t.distance = std::max(0.0, 1.0 - d / w.d_safe);
  // Sight rays range over the vehicle's operational radius l_max, so a state
  // with nothing blocked within tether reach carries no visibility risk.
  t.visibility = 1.0 - world.isovist_score(s.position, 64, w.l_max);
  const double clearance = world.vertical_clearance(s.position);
  t.altitude = std::max(0.0, 1.0 - clearance / w.h_min);
  const double sin_eff = std::sin(s.tether.effective_controls().elevation);
  const double sin_knee = std::sin(w.theta_sing);
  t.singularity = std::max(0.0, (sin_eff - sin_knee) / (1.0 - sin_knee));
  return t;
}

RiskAccumulator::RiskAccumulator(const GridWorld& world,
                                 const RiskWeights& weights)
    : world_(world), weights_(weights) {
  weights_.validate();
}

StateRiskTerms RiskAccumulator::terms_at(const PathState& s) const {
  // The position-only terms depend on the cell center alone when the state
  // sits exactly there, which is the planner's hot path.
  const bool centered = (s.position - world_.center(s.cell)).norm() < 1e-12;
  StateRiskTerms t;
  if (centered) {
    const auto it = cell_cache_.find(world_.index(s.cell));
    if (it != cell_cache_.end()) {
      t.distance = it->second.distance;
      t.visibility = it->second.visibility;
      t.altitude = it->second.altitude;
    } else {
      const double d = world_.distance_to_obstacle(s.position);
      t.distance = std::max(0.0, 1.0 - d / weights_.d_safe);
      t.visibility =
          1.0 - world_.isovist_score(s.position, 64, weights_.l_max);
      const double clearance = world_.vertical_clearance(s.position);
      t.altitude = std::max(0.0, 1.0 - clearance / weights_.h_min);
      cell_cache_.emplace(world_.index(s.cell),
                          CellTerms{t.distance, t.visibility, t.altitude});
    }
  } else {
    const double d = world_.distance_to_obstacle(s.position);
    t.distance = std::max(0.0, 1.0 - d / weights_.d_safe);
    t.visibility = 1.0 - world_.isovist_score(s.position, 64, weights_.l_max);
    const double clearance = world_.vertical_clearance(s.position);
    t.altitude = std::max(0.0, 1.0 - clearance / weights_.h_min);
  }
  const double sin_eff = std::sin(s.tether.effective_controls().elevation);
  const double sin_knee = std::sin(weights_.theta_sing);
  t.singularity = std::max(0.0, (sin_eff - sin_knee) / (1.0 - sin_knee));
  return t;
}

RiskBreakdown RiskAccumulator::start(const PathState& s0) const {
  RiskBreakdown b;
  const StateRiskTerms t = terms_at(s0);
  b.distance = t.distance;
  b.visibility = t.visibility;
  b.altitude = t.altitude;
  b.singularity = t.singularity;
  b.tether_length = s0.tether.total_length() / weights_.l_max;
  b.contact_count = static_cast<double>(s0.tether.contact_count());
  return b;
}

RiskBreakdown RiskAccumulator::extend(const RiskBreakdown& prefix,
                                      const PathState& prev,
                                      const std::optional<Vec3>& prev_action,
                                      const PathState& next) const {
  RiskBreakdown b = prefix;
  const StateRiskTerms t = terms_at(next);
  b.distance += t.distance;
  b.visibility += t.visibility;
  b.altitude += t.altitude;
  b.singularity += t.singularity;

  const Vec3 action = next.position - prev.position;
  b.action_length += action.norm();
  const double ae = world_.access_difficulty(world_.void_id(prev.cell),
                                             world_.void_id(next.cell));
  b.access += std::max(ae, 0.0);
  if (prev_action) {
    b.tortuosity += (action - *prev_action).norm();
  }
  b.tether_length += next.tether.total_length() / weights_.l_max;
  b.contact_count += static_cast<double>(next.tether.contact_count());
  const double dphi = wrap_angle(next.tether.effective_controls().azimuth -
                                 prev.tether.effective_controls().azimuth);
  b.azimuth_sweep += std::abs(dphi);
  return b;
}

RiskBreakdown path_risk(const Path& path, const GridWorld& world,
                        const RiskWeights& weights) {
  validate_path(path, world);
  const RiskAccumulator acc(world, weights);
  RiskBreakdown b = acc.start(path.states.front());
  std::optional<Vec3> prev_action;
  for (std::size_t i = 1; i < path.size(); ++i) {
    b = acc.extend(b, path.states[i - 1], prev_action, path.states[i]);
    prev_action = path.states[i].position - path.states[i - 1].position;
  }
  return b;
}

}  // namespace tetherplan
