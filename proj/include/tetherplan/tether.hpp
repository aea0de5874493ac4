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

#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/grid_world.hpp"

namespace tetherplan {

// Taut tether as a polyline: reel anchor, an ordered stack of environment
// contact points where the cord bends around obstacle corners, and the
// vehicle position. TetherState is a value; updates produce new values.
class TetherState {
 public:
  TetherState(const Vec3& anchor, const Vec3& uav);

  // Direct construction with a prescribed contact stack. Consecutive
  // polyline vertices must be distinct; collision-freedom against a world is
  // the caller's responsibility (see tether_feasible).
  TetherState(const Vec3& anchor, std::vector<Vec3> contacts,
              const Vec3& uav);

  const Vec3& anchor() const { return anchor_; }
  const std::vector<Vec3>& contacts() const { return contacts_; }
  const Vec3& uav() const { return uav_; }
  int contact_count() const { return static_cast<int>(contacts_.size()); }

  // Last polyline vertex before the vehicle: top contact, or the anchor when
  // the stack is empty.
  const Vec3& last_vertex() const {
    return contacts_.empty() ? anchor_ : contacts_.back();
  }

  // Length of the wrapped portion: anchor through the top contact. Zero when
  // there are no contacts.
  double static_length() const;

  // Length / elevation / azimuth of the vehicle relative to the last vertex.
  // At the vertical pole the azimuth holds its last well-defined value.
  PolarCoords effective_controls() const;

  // Total deployed cord: static_length() + effective length, refreshed on
  // every update.
  double total_length() const { return total_length_; }

  friend TetherState update_contacts(const TetherState& state,
                                     const Vec3& new_uav,
                                     const GridWorld& world);

 private:
  void refresh();

  Vec3 anchor_;
  std::vector<Vec3> contacts_;
  Vec3 uav_;
  double total_length_ = 0.0;
  double azimuth_hint_ = 0.0;  // last well-defined effective azimuth
};

// Advances the tether for one vehicle motion of at most one cell. Pops
// contacts whose predecessor vertex became visible again, then pushes new
// contacts at the obstacle corners that break line of sight, and refreshes
// the cord lengths. Throws CollisionError when new_uav is inside an
// obstacle and TetherInfeasibleError when no valid contact exists.
TetherState update_contacts(const TetherState& state, const Vec3& new_uav,
                            const GridWorld& world);

// update_contacts for an arbitrary-length motion: subdivides the segment
// into steps of at most one cell.
TetherState tether_step(const TetherState& state, const Vec3& new_uav,
                        const GridWorld& world);

// True iff every polyline segment passes line of sight.
bool tether_feasible(const TetherState& state, const GridWorld& world);

}  // namespace tetherplan
