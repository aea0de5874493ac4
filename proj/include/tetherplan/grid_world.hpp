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
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tetherplan/errors.hpp"
#include "tetherplan/geometry.hpp"

namespace tetherplan {

// Integer grid index. Ordering is lexicographic on (x, y, z).
struct Cell {
  int x = 0, y = 0, z = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Directed crossing difficulty between two labeled free-space regions.
struct AccessEntry {
  int from = 0;
  int to = 0;
  double difficulty = 0.0;  // dimensionless, may be negative
};

struct GridWorldParams {
  Cell dims;                  // cell counts per axis, all > 0
  double cell_size = 1.0;     // meters
  std::vector<Cell> occupied;
  // Optional explicit region labels. When empty, regions are computed as
  // 26-connected components of free space. When supplied, they must cover
  // every free cell exactly once and each label must form one 26-connected
  // component.
  std::vector<std::pair<Cell, int>> void_labels;
  std::vector<AccessEntry> access;
};

// First blocked location along a traced segment: parametric time in [0, 1]
// and the touched cell (which may lie outside the grid when the segment
// reaches the workspace boundary).
struct RayHit {
  double t = 0.0;
  Cell cell;
};

// Immutable 3-D occupancy grid with collision, visibility, distance, and
// free-space segmentation queries. The workspace spans
// [0, dims * cell_size] per axis; everything outside it is treated as
// obstacle. All queries are const and safe to call concurrently.
class GridWorld {
 public:
  explicit GridWorld(GridWorldParams params);

  const Cell& dims() const { return dims_; }
  double cell_size() const { return cell_size_; }
  Vec3 workspace_size() const {
    return {dims_.x * cell_size_, dims_.y * cell_size_, dims_.z * cell_size_};
  }
  // Length of the workspace diagonal; default sight radius for isovists.
  double diagonal() const { return workspace_size().norm(); }

  bool in_bounds(const Cell& c) const {
    return c.x >= 0 && c.x < dims_.x && c.y >= 0 && c.y < dims_.y &&
           c.z >= 0 && c.z < dims_.z;
  }
  // Out-of-bounds cells report as not free.
  bool is_free(const Cell& c) const {
    return in_bounds(c) && occ_[index(c)] == 0;
  }
  bool is_occupied(const Cell& c) const {
    return in_bounds(c) && occ_[index(c)] != 0;
  }

  Vec3 center(const Cell& c) const {
    return {(c.x + 0.5) * cell_size_, (c.y + 0.5) * cell_size_,
            (c.z + 0.5) * cell_size_};
  }
  Cell cell_at(const Vec3& p) const {
    return {static_cast<int>(std::floor(p.x / cell_size_)),
            static_cast<int>(std::floor(p.y / cell_size_)),
            static_cast<int>(std::floor(p.z / cell_size_))};
  }

  // True iff the segment a-b touches no occupied cell and stays inside the
  // workspace. Grazing a face, edge, or corner exactly counts as blocked.
  bool line_of_sight(const Vec3& a, const Vec3& b) const {
    return !trace_segment(a, b).has_value();
  }

  // First touched blocked cell along segment a-b, or nullopt when clear.
  std::optional<RayHit> trace_segment(const Vec3& a, const Vec3& b) const;

  // Euclidean distance from p to the nearest occupied-cell surface or
  // workspace boundary face. Throws CollisionError when p is not in free
  // space.
  double distance_to_obstacle(const Vec3& p) const;

  // Precomputed distance_to_obstacle evaluated at a free cell's center.
  double distance_at_center(const Cell& c) const;

  // Mean free-ray length over ray_count directions (deterministic Fibonacci
  // sphere layout), each clipped to r_max, normalized into [0, 1]. r_max <= 0
  // selects the workspace diagonal.
  double isovist_score(const Vec3& p, int ray_count = 64,
                       double r_max = -1.0) const;

  // Vertical free gap: min(distance to first surface above, below) from p.
  double vertical_clearance(const Vec3& p) const;

  // Label of the free-space region containing the cell; -1 for occupied or
  // out-of-bounds cells.
  int void_id(const Cell& c) const {
    return in_bounds(c) ? void_of_[index(c)] : -1;
  }
  int void_count() const { return void_count_; }

  // Directed crossing difficulty; unspecified pairs default to 0.
  double access_difficulty(int from_void, int to_void) const;

  std::size_t occupied_count() const { return occupied_count_; }
  std::size_t free_count() const {
    return static_cast<std::size_t>(dims_.x) * dims_.y * dims_.z -
           occupied_count_;
  }

  // FNV-1a digest of the grid content; stored in plan files so a plan can
  // only be simulated against the world it was computed for.
  std::uint64_t content_hash() const { return hash_; }

  std::size_t index(const Cell& c) const {
    return static_cast<std::size_t>(c.x) +
           static_cast<std::size_t>(dims_.x) *
               (static_cast<std::size_t>(c.y) +
                static_cast<std::size_t>(dims_.y) *
                    static_cast<std::size_t>(c.z));
  }

 private:
  void build_distance_field();
  void build_voids(const std::vector<std::pair<Cell, int>>& supplied);
  double boundary_distance(const Vec3& p) const;
  bool blocked_for_ray(long long ix, long long iy, long long iz) const;

  Cell dims_;
  double cell_size_ = 1.0;
  std::vector<std::uint8_t> occ_;
  std::vector<double> dist_;     // meters, at free cell centers
  std::vector<int> void_of_;    // -1 for occupied
  int void_count_ = 0;
  std::unordered_set<int> known_voids_;
  std::unordered_map<std::uint64_t, double> access_;
  std::size_t occupied_count_ = 0;
  std::uint64_t hash_ = 0;
};

}  // namespace tetherplan
