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

#include <random>
#include <vector>

#include "tetherplan/grid_world.hpp"

namespace tetherplan::testing {

// Empty grid of the given dims.
inline GridWorld empty_world(Cell dims, double cell_size = 1.0) {
  return GridWorld({.dims = dims, .cell_size = cell_size});
}

// Grid with the listed occupied cells.
inline GridWorld world_with(Cell dims, double cell_size,
                            std::vector<Cell> occupied) {
  return GridWorld(
      {.dims = dims, .cell_size = cell_size, .occupied = std::move(occupied)});
}

// Full-height pillar covering [x0, x1] x [z0, z1].
inline void add_pillar(std::vector<Cell>& occ, const Cell& dims, int x0,
                       int x1, int z0, int z1) {
  for (int x = x0; x <= x1; ++x) {
    for (int z = z0; z <= z1; ++z) {
      for (int y = 0; y < dims.y; ++y) occ.push_back({x, y, z});
    }
  }
}

// Uniformly random point strictly inside a free cell of the world.
inline Vec3 random_free_point(const GridWorld& w, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dx(0, w.dims().x - 1);
  std::uniform_int_distribution<int> dy(0, w.dims().y - 1);
  std::uniform_int_distribution<int> dz(0, w.dims().z - 1);
  std::uniform_real_distribution<double> off(0.05, 0.95);
  for (;;) {
    const Cell c{dx(rng), dy(rng), dz(rng)};
    if (!w.is_free(c)) continue;
    const double s = w.cell_size();
    return {(c.x + off(rng)) * s, (c.y + off(rng)) * s, (c.z + off(rng)) * s};
  }
}

}  // namespace tetherplan::testing
