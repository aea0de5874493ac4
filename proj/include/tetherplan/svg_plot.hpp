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

#include <string>
#include <vector>

#include "tetherplan/planner.hpp"
#include "tetherplan/sim.hpp"

namespace tetherplan {

// Renders a top-down horizontal slice (x right, z up) at the vertical layer
// of the plan's terminal waypoint: obstacle cells in that layer, the planned
// path, tether polyline snapshots along the executed trajectory, contact
// points, and a legend summarizing the contact events.
std::string render_slice_svg(const GridWorld& world, const PlanResult& plan,
                             const std::vector<LogRow>& log,
                             const Vec3& anchor);

}  // namespace tetherplan
