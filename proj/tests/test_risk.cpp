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
#include "tetherplan/risk.hpp"

using namespace tetherplan;
using namespace tetherplan::testing;

namespace {

PathState state_at(const GridWorld& w, const Cell& c, const Vec3& anchor) {
  return {c, w.center(c), TetherState(anchor, w.center(c))};
}

// Random simple path of LOS-clear cell steps starting at `start`.
std::vector<Cell> random_simple_cells(const GridWorld& w, Cell start,
                                      int max_len, std::mt19937_64& rng) {
  std::vector<Cell> cells{start};
  std::uniform_int_distribution<int> d(-1, 1);
  for (int i = 0; i < max_len * 4 && static_cast<int>(cells.size()) < max_len;
       ++i) {
    const Cell cur = cells.back();
    const Cell next{cur.x + d(rng), cur.y + d(rng), cur.z + d(rng)};
    if (next == cur || !w.is_free(next)) continue;
    if (std::find(cells.begin(), cells.end(), next) != cells.end()) continue;
    if (!w.line_of_sight(w.center(cur), w.center(next))) continue;
    cells.push_back(next);
  }
  return cells;
}

}  // namespace

TEST_CASE("state risk elements") {
  RiskWeights w;  // d_safe=1, h_min=0.4, theta_sing=75deg, l_max=10

  SUBCASE("wide-open state with a horizontal cord scores zero everywhere") {
    const GridWorld g = empty_world({44, 44, 44});
    const Cell c{22, 22, 22};
    // Anchor far to the side: elevation 0.
    const PathState s{c, g.center(c),
                      TetherState(g.center(c) - Vec3{8.0, 0.0, 0.0},
                                  g.center(c))};
    const StateRiskTerms t = state_risk(s, g, w);
    CHECK(t.distance == 0.0);
    CHECK(t.visibility == 0.0);
    CHECK(t.altitude == 0.0);
    CHECK(t.singularity == 0.0);
  }
  SUBCASE("effective elevation at the pole saturates singularity risk") {
    const GridWorld g = empty_world({44, 44, 44});
    const Cell c{22, 30, 22};
    const PathState s{c, g.center(c),
                      TetherState(g.center(c) - Vec3{0.0, 5.0, 0.0},
                                  g.center(c))};
    CHECK(state_risk(s, g, w).singularity == doctest::Approx(1.0));
  }
  SUBCASE("half the safety distance gives half the distance risk") {
    // Wall of cells at x >= 20 (cs = 0.5 -> surface at x = 10.0).
    std::vector<Cell> occ;
    for (int y = 0; y < 40; ++y) {
      for (int z = 0; z < 40; ++z) occ.push_back({20, y, z});
    }
    const GridWorld g = world_with({21, 40, 40}, 0.5, occ);
    const Vec3 p{9.5, 10.25, 10.25};  // 0.5 m from the wall face
    REQUIRE(g.distance_to_obstacle(p) == doctest::Approx(0.5));
    const PathState s{g.cell_at(p), p, TetherState({5.0, 10.25, 10.25}, p)};
    CHECK(state_risk(s, g, w).distance == doctest::Approx(0.5));
  }
  SUBCASE("low ceiling clearance raises altitude risk") {
    const GridWorld g = empty_world({10, 2, 10}, 0.5);  // 1 m tall
    const Cell c{5, 1, 5};  // center y = 0.75, gap above = 0.25 m
    const PathState s{c, g.center(c),
                      TetherState({2.0, 0.2, 2.0}, g.center(c))};
    CHECK(state_risk(s, g, w).altitude ==
          doctest::Approx(1.0 - 0.25 / w.h_min));
  }
}

TEST_CASE("path risk elements") {
  RiskWeights w;
  const GridWorld g = empty_world({30, 6, 30}, 0.5);
  const Vec3 anchor{7.2, 0.3, 7.2};

  SUBCASE("single-state path has only state and tether terms") {
    const Path p = make_path(g, anchor, {{14, 2, 14}});
    const RiskBreakdown b = path_risk(p, g, w);
    CHECK(b.action_length == 0.0);
    CHECK(b.access == 0.0);
    CHECK(b.tortuosity == 0.0);
    CHECK(b.azimuth_sweep == 0.0);
    CHECK(b.contact_count == 0.0);
    CHECK(b.tether_length ==
          doctest::Approx(p.states[0].tether.total_length() / w.l_max));
  }
  SUBCASE("straight three-cell path: length only, no turning") {
    const Path p = make_path(g, anchor, {{14, 2, 14}, {15, 2, 14},
                                         {16, 2, 14}});
    const RiskBreakdown b = path_risk(p, g, w);
    CHECK(b.action_length == doctest::Approx(2.0 * 0.5));
    CHECK(b.tortuosity == 0.0);
  }
  SUBCASE("one right-angle turn costs sqrt(2) cells of tortuosity") {
    const Path p = make_path(g, anchor, {{14, 2, 14}, {15, 2, 14},
                                         {15, 2, 15}});
    const RiskBreakdown b = path_risk(p, g, w);
    CHECK(b.tortuosity == doctest::Approx(std::sqrt(2.0) * 0.5));
  }
  SUBCASE("only positive access difficulty accumulates") {
    GridWorldParams params{.dims = {2, 1, 1}, .cell_size = 1.0};
    params.void_labels = {{Cell{0, 0, 0}, 0}, {Cell{1, 0, 0}, 1}};
    params.access = {{0, 1, -2.0}, {1, 0, 3.0}};
    const GridWorld g2(params);
    const Vec3 a2{0.5, 0.2, 0.5};
    const RiskBreakdown easy =
        path_risk(make_path(g2, a2, {{0, 0, 0}, {1, 0, 0}}), g2, w);
    CHECK(easy.access == 0.0);
    const RiskBreakdown hard =
        path_risk(make_path(g2, a2 + Vec3{1.0, 0.0, 0.0},
                            {{1, 0, 0}, {0, 0, 0}}),
                  g2, w);
    CHECK(hard.access == doctest::Approx(3.0));
  }
  SUBCASE("relaxed contacts do not cancel contact risk") {
    // Wall with a western gap; the cord wraps the gap corner for exactly one
    // state and relaxes afterwards.
    std::vector<Cell> occ;
    const Cell dims{6, 3, 6};
    add_pillar(occ, dims, 2, 5, 2, 2);
    const GridWorld g2 = world_with(dims, 1.0, occ);
    const Vec3 a2{0.8, 0.4, 0.8};
    const Path p = make_path(g2, a2,
                             {{1, 1, 1},
                              {1, 1, 2},
                              {1, 1, 3},
                              {2, 1, 4},
                              {3, 1, 4},
                              {2, 1, 5}});
    std::vector<int> counts;
    for (const PathState& s : p.states) {
      counts.push_back(s.tether.contact_count());
    }
    REQUIRE(counts == std::vector<int>{0, 0, 0, 0, 1, 0});
    const RiskBreakdown b = path_risk(p, g2, w);
    CHECK(b.contact_count == doctest::Approx(1.0));
  }
  SUBCASE("zero weights give zero total") {
    RiskWeights zero;
    zero.w_distance = zero.w_visibility = zero.w_altitude =
        zero.w_singularity = zero.w_action_length = zero.w_access =
            zero.w_tortuosity = zero.w_tether_length = zero.w_contacts =
                zero.w_azimuth = 0.0;
    const Path p = make_path(g, anchor, {{14, 2, 14}, {15, 2, 14}});
    CHECK(path_risk(p, g, zero).total(zero) == 0.0);
  }
}

TEST_CASE("path validation") {
  const GridWorld g = world_with({4, 1, 4}, 1.0, {{2, 0, 2}});
  const Vec3 anchor{0.4, 0.3, 0.4};
  SUBCASE("repeated cell rejected") {
    Path p = make_path(g, anchor, {{0, 0, 0}, {1, 0, 0}});
    p.states.push_back(p.states.front());
    CHECK_THROWS_AS(validate_path(p, g), ConfigError);
  }
  SUBCASE("non-adjacent jump rejected") {
    Path p = make_path(g, anchor, {{0, 0, 0}, {1, 0, 0}});
    Path q = make_path(g, anchor + Vec3{3.0, 0.2, 0.0}, {{3, 0, 0}});
    p.states.push_back(q.states.front());
    CHECK_THROWS_AS(validate_path(p, g), ConfigError);
  }
  SUBCASE("corner-clipping diagonal rejected") {
    const GridWorld g2 = world_with({3, 1, 3}, 1.0, {{1, 0, 0}, {0, 0, 1}});
    CHECK_THROWS_AS(make_path(g2, Vec3{0.5, 0.5, 0.4},
                              {{0, 0, 0}, {1, 0, 1}}),
                    ConfigError);
  }
}

TEST_CASE("risk never decreases along an extension") {
  std::mt19937_64 rng(71);
  RiskWeights w;
  w.l_max = 30.0;  // keep long tethers inside the normalizer
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Cell> occ;
    std::uniform_int_distribution<int> d(0, 7);
    for (int i = 0; i < 10; ++i) occ.push_back({d(rng), d(rng), d(rng)});
    const GridWorld g = world_with({8, 8, 8}, 1.0, occ);
    if (!g.is_free({0, 0, 0})) continue;
    const Vec3 anchor = g.center({0, 0, 0}) - Vec3{0.2, 0.3, 0.2};

    for (int rep = 0; rep < 12; ++rep) {
      const auto cells = random_simple_cells(g, {0, 0, 0}, 8, rng);
      if (cells.size() < 2) continue;
      std::vector<Cell> prefix(cells.begin(), cells.end() - 1);
      Path p, q;
      try {
        p = make_path(g, anchor, prefix);
        q = make_path(g, anchor, cells);
      } catch (const Error&) {
        continue;  // tether pinched on this course
      }
      const RiskBreakdown bp = path_risk(p, g, w);
      const RiskBreakdown bq = path_risk(q, g, w);
      const auto ep = bp.elements();
      const auto eq = bq.elements();
      for (int k = 0; k < 10; ++k) CHECK(eq[k] >= ep[k]);
      CHECK(bq.total(w) >= bp.total(w));
      ++checked;
    }
  }
  CHECK(checked > 100);
}
