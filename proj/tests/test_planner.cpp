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

#include <random>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "tetherplan/planner.hpp"

using namespace tetherplan;
using namespace tetherplan::testing;

namespace {

ViewpointQualityMap map_at(const Vec3& center, double radius,
                           const std::vector<double>& metrics) {
  return ViewpointQualityMap(
      {.center = center, .forward = {0.0, 0.0, 1.0}, .radius = radius},
      metrics);
}

std::vector<double> ramp_metrics() {
  std::vector<double> m(30);
  for (int i = 0; i < 30; ++i) m[i] = 1.0 + i;
  return m;
}

}  // namespace

TEST_CASE("plan on a single free cell returns the zero-length path") {
  std::vector<Cell> occ;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      for (int z = 0; z < 3; ++z) {
        if (!(x == 1 && y == 1 && z == 1)) occ.push_back({x, y, z});
      }
    }
  }
  const GridWorld w = world_with({3, 3, 3}, 1.0, occ);
  const ViewpointQualityMap map = map_at({1.2, 1.2, 1.2}, 0.5, ramp_metrics());
  RiskWeights weights;
  const Vec3 anchor{1.4, 1.3, 1.4};
  const PlanResult r = plan(w, map, weights, {1, 1, 1}, anchor);
  CHECK(r.path.size() == 1);
  CHECK(r.terminal_reward == map.quality(w.center({1, 1, 1})));
  // Breakdown equals an independent re-evaluation of the returned path.
  const RiskBreakdown again = path_risk(r.path, w, weights);
  CHECK(again.elements() == r.breakdown.elements());
  CHECK(r.utility ==
        doctest::Approx(r.terminal_reward / (r.total_risk + 1.0)));
}

TEST_CASE("plan errors") {
  const GridWorld w = world_with({3, 3, 3}, 1.0, {{1, 1, 1}});
  const ViewpointQualityMap map = map_at({1.2, 1.2, 1.2}, 0.5, ramp_metrics());
  RiskWeights weights;
  CHECK_THROWS_AS(plan(w, map, weights, {1, 1, 1}, {0.4, 0.4, 0.4}),
                  CollisionError);
  CHECK_THROWS_AS(plan(w, map, weights, {9, 0, 0}, {0.4, 0.4, 0.4}),
                  CollisionError);
}

TEST_CASE("open flat grid matches the exhaustive oracle") {
  const GridWorld w = empty_world({4, 1, 4});
  // Reward peaks near the far corner: only front-group viewpoints (the far
  // side of the target) score, so staying at the start is worthless.
  const ViewpointQualityMap probe =
      map_at({3.3, 0.4, 3.2}, 0.6, std::vector<double>(30, 1.0));
  std::vector<double> metrics(30);
  for (int i = 0; i < 30; ++i) {
    metrics[i] =
        probe.samples()[i].group == ViewGroup::kFront ? 1.0 : 100.0;
  }
  const ViewpointQualityMap map = map_at({3.3, 0.4, 3.2}, 0.6, metrics);
  RiskWeights weights;
  weights.h_min = 0.2;  // flat world: keep altitude risk in range
  const Vec3 anchor{0.4, 0.2, 0.4};
  const PlanResult got = plan(w, map, weights, {0, 0, 0}, anchor);
  const PlanResult want =
      brute_force_plan(w, map, weights, {0, 0, 0}, anchor);
  CHECK(got.utility == doctest::Approx(want.utility).epsilon(1e-12));
  CHECK(got.path.states.back().cell == want.path.states.back().cell);
  // The peak pulls the plan away from the start.
  CHECK(got.path.size() > 1);
}

TEST_CASE("reward behind a pillar forces a tether wrap") {
  // Flat scene; the anchor side of the pillar is visible, the reward peak
  // hides behind it. Only front-group viewpoints (north of the target) are
  // worth anything.
  std::vector<Cell> occ;
  const Cell dims{6, 1, 6};
  add_pillar(occ, dims, 2, 3, 2, 3);
  const GridWorld w = world_with(dims, 1.0, occ);
  const ViewpointQualityMap probe =
      map_at({2.8, 0.6, 4.6}, 0.8, std::vector<double>(30, 1.0));
  std::vector<double> metrics(30);
  for (int i = 0; i < 30; ++i) {
    metrics[i] =
        probe.samples()[i].group == ViewGroup::kFront ? 1.0 : 100.0;
  }
  const ViewpointQualityMap map = map_at({2.8, 0.6, 4.6}, 0.8, metrics);
  RiskWeights weights;
  weights.h_min = 0.2;
  weights.w_visibility = 0.1;  // confined flat world; keep risk moderate
  weights.w_distance = 0.1;
  weights.w_altitude = 0.1;
  const Vec3 anchor{2.8, 0.5, 0.4};  // south of the pillar
  const PlanResult got = plan(w, map, weights, {2, 0, 0}, anchor);
  const PlanResult want =
      brute_force_plan(w, map, weights, {2, 0, 0}, anchor);
  CHECK(got.utility == doctest::Approx(want.utility).epsilon(1e-12));
  CHECK(got.path.states.back().tether.contact_count() >= 1);

  // Its utility beats every contact-free candidate: the best reward in
  // direct line of sight of the anchor is strictly lower.
  PlannerConfig los_cfg;
  los_cfg.require_poi_los = false;
  double best_free = 0.0;
  for (int x = 0; x < 6; ++x) {
    for (int z = 0; z < 6; ++z) {
      const Cell c{x, 0, z};
      if (!w.is_free(c)) continue;
      if (!w.line_of_sight(anchor, w.center(c))) continue;
      const PlanResult to_c = [&] {
        PlanResult r;
        try {
          Path p = min_risk_to(w, weights, {2, 0, 0}, anchor, c);
          r.breakdown = path_risk(p, w, weights);
          r.total_risk = r.breakdown.total(weights);
          r.terminal_reward = map.quality(w.center(c));
          r.utility = r.terminal_reward / (r.total_risk + 1.0);
        } catch (const Error&) {
          r.utility = 0.0;
        }
        return r;
      }();
      best_free = std::max(best_free, to_c.utility);
    }
  }
  CHECK(got.utility > best_free);
}

TEST_CASE("min risk paths") {
  RiskWeights weights;
  SUBCASE("goal equals start") {
    const GridWorld w = empty_world({4, 2, 4});
    const Path p = min_risk_to(w, weights, {1, 0, 1}, {1.2, 0.3, 1.2},
                               {1, 0, 1});
    CHECK(p.size() == 1);
  }
  SUBCASE("one-wide corridor has a unique route") {
    // Corridor along x at z=1, everything else at z!=1 occupied.
    std::vector<Cell> occ;
    for (int x = 0; x < 5; ++x) {
      for (int z = 0; z < 3; ++z) {
        if (z != 1) occ.push_back({x, 0, z});
      }
    }
    const GridWorld w = world_with({5, 1, 3}, 1.0, occ);
    const Path p = min_risk_to(w, weights, {0, 0, 1}, {0.4, 0.6, 1.4},
                               {4, 0, 1});
    REQUIRE(p.size() == 5);
    for (int i = 0; i < 5; ++i) {
      CHECK(p.states[i].cell == Cell{i, 0, 1});
    }
  }
  SUBCASE("unreachable goal reports an error") {
    std::vector<Cell> occ;
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 3; ++z) occ.push_back({2, y, z});
    }
    const GridWorld w = world_with({5, 2, 3}, 1.0, occ);
    CHECK_THROWS_AS(min_risk_to(w, weights, {0, 0, 0}, {0.4, 0.3, 0.4},
                                {4, 0, 0}),
                    Error);
  }
  SUBCASE("high turn weight prefers the straight detour") {
    // Two routes from W to E: a straight northern corridor and a southern
    // zigzag. All other cells blocked.
    //   z=3:  . . . . . . .     (north corridor, straight)
    //   z=2:  # # # # # # #
    //   z=0/1: zigzag teeth
    std::vector<Cell> occ;
    const Cell dims{7, 1, 4};
    for (int x = 1; x < 6; ++x) occ.push_back({x, 0, 2});
    // Zigzag teeth force turns on the southern route.
    occ.push_back({1, 0, 0});
    occ.push_back({3, 0, 1});
    occ.push_back({5, 0, 0});
    const GridWorld w = world_with(dims, 1.0, occ);
    RiskWeights turny;
    turny.h_min = 0.2;
    turny.w_tortuosity = 50.0;
    const Path p = min_risk_to(w, turny, {0, 0, 0}, {0.4, 0.3, 0.4},
                               {6, 0, 0});
    bool used_north = false;
    for (const PathState& s : p.states) {
      if (s.cell.z == 3) used_north = true;
    }
    CHECK(used_north);
  }
}

TEST_CASE("randomized oracle equivalence") {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> wgt(0.2, 2.0);
  std::uniform_real_distribution<double> met(0.5, 10.0);
  std::uniform_real_distribution<double> posj(0.2, 0.8);
  int done = 0;
  int attempts = 0;
  while (done < 10 && ++attempts < 60) {
    const Cell dims{3 + static_cast<int>(rng() % 2),
                    1 + static_cast<int>(rng() % 2),
                    3 + static_cast<int>(rng() % 2)};
    std::vector<Cell> occ;
    std::uniform_int_distribution<int> dx(0, dims.x - 1);
    std::uniform_int_distribution<int> dy(0, dims.y - 1);
    std::uniform_int_distribution<int> dz(0, dims.z - 1);
    const int n_obs = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n_obs; ++i) occ.push_back({dx(rng), dy(rng), dz(rng)});
    const GridWorld w = world_with(dims, 1.0, occ);
    const Cell start{0, 0, 0};
    if (!w.is_free(start) || w.free_count() > 40) continue;

    RiskWeights weights;
    weights.w_distance = wgt(rng);
    weights.w_visibility = wgt(rng);
    weights.w_altitude = wgt(rng);
    weights.w_singularity = wgt(rng);
    weights.w_action_length = wgt(rng);
    weights.w_access = wgt(rng);
    weights.w_tortuosity = wgt(rng);
    weights.w_tether_length = wgt(rng);
    weights.w_contacts = wgt(rng);
    weights.w_azimuth = wgt(rng);
    weights.h_min = 0.3;

    std::vector<double> metrics(30);
    for (double& m : metrics) m = met(rng);
    const Vec3 center{dims.x * posj(rng), dims.y * posj(rng),
                      dims.z * posj(rng)};
    const ViewpointQualityMap map = map_at(center, 0.7, metrics);
    const Vec3 anchor{posj(rng), posj(rng), posj(rng)};

    PlanResult got, want;
    try {
      got = plan(w, map, weights, start, anchor);
      want = brute_force_plan(w, map, weights, start, anchor);
    } catch (const Error&) {
      continue;  // e.g. anchor boxed in
    }
    CHECK(std::abs(got.utility - want.utility) <= 1e-9);
    // The returned path re-evaluates to exactly the reported breakdown.
    const RiskBreakdown again = path_risk(got.path, w, weights);
    CHECK(again.elements() == got.breakdown.elements());
    validate_path(got.path, w);
    ++done;
  }
  CHECK(done == 10);
}

TEST_CASE("metric normalization is affine invariant") {
  const GridWorld w = empty_world({4, 2, 4});
  RiskWeights weights;
  std::vector<double> metrics = ramp_metrics();
  const ViewpointQualityMap base = map_at({2.2, 0.6, 2.1}, 0.7, metrics);
  for (double& m : metrics) m = 3.0 * m + 5.0;
  const ViewpointQualityMap scaled = map_at({2.2, 0.6, 2.1}, 0.7, metrics);
  const Vec3 anchor{0.4, 0.3, 0.4};
  const PlanResult a = plan(w, base, weights, {0, 0, 0}, anchor);
  const PlanResult b = plan(w, scaled, weights, {0, 0, 0}, anchor);
  CHECK(a.utility == b.utility);
  REQUIRE(a.path.size() == b.path.size());
  for (std::size_t i = 0; i < a.path.size(); ++i) {
    CHECK(a.path.states[i].cell == b.path.states[i].cell);
  }
}

TEST_CASE("zero reward everywhere keeps the vehicle at the start") {
  const GridWorld w = empty_world({4, 2, 4});
  RiskWeights weights;
  // All metrics equal -> all rewards 1; require_poi_los with a boxed-in
  // target zeroes everything instead.
  std::vector<double> metrics(30, 2.0);
  const ViewpointQualityMap map = map_at({2.0, 0.7, 2.1}, 0.4, metrics);
  PlannerConfig cfg;
  cfg.require_poi_los = true;
  // Target outside the workspace line of sight: bury it by occupying the
  // cells around it is overkill; instead point far outside the grid.
  const ViewpointQualityMap far_map =
      map_at({40.0, 0.7, 40.0}, 0.4, metrics);
  const PlanResult r =
      plan(w, far_map, weights, {1, 0, 1}, {1.2, 0.4, 1.2}, cfg);
  CHECK(r.path.size() == 1);
  CHECK(r.path.states.front().cell == Cell{1, 0, 1});
  CHECK(r.terminal_reward == 0.0);
  CHECK(r.utility == 0.0);
}
