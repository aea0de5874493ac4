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

#include <string>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "tetherplan/sim.hpp"

using namespace tetherplan;
using namespace tetherplan::testing;

namespace {

ViewpointQualityMap simple_map(const Vec3& center) {
  std::vector<double> metrics(30, 2.0);  // all rewards 1
  return ViewpointQualityMap(
      {.center = center, .forward = {0.0, 0.0, 1.0}, .radius = 0.6}, metrics);
}

PlanResult plan_through(const GridWorld& w, const Vec3& anchor,
                        const std::vector<Cell>& cells,
                        const RiskWeights& weights) {
  PlanResult plan;
  plan.path = make_path(w, anchor, cells);
  plan.breakdown = path_risk(plan.path, w, weights);
  plan.total_risk = plan.breakdown.total(weights);
  plan.terminal_reward = 1.0;
  plan.utility = plan.terminal_reward / (plan.total_risk + 1.0);
  return plan;
}

void check_length_consistency(const SimResult& r) {
  for (const TetherState& t : r.tether_trace) {
    const double expect = t.static_length() + t.effective_controls().length;
    CHECK(std::abs(t.total_length() - expect) <= 1e-9);
  }
}

void check_camera(const SimResult& r, const Vec3& poi) {
  for (const LogRow& row : r.log) {
    const Vec3 axis =
        optical_axis({.vehicle_yaw = row.yaw, .camera_pitch = row.pitch});
    const Vec3 want = (poi - row.position).normalized();
    CHECK(axis.cross(want).norm() < 1e-6);
    CHECK(axis.dot(want) > 0.0);
  }
}

}  // namespace

TEST_CASE("zero-length plan simulates to zero steps") {
  const GridWorld w = empty_world({6, 4, 6}, 0.5);
  const Vec3 anchor{0.3, 0.2, 0.3};
  RiskWeights weights;
  const PlanResult plan = plan_through(w, anchor, {{1, 1, 1}}, weights);
  const ViewpointQualityMap map = simple_map({1.6, 0.7, 1.6});
  const SimResult r =
      simulate(plan, w, map, weights, SimConfig{}, ControllerConfig{});
  CHECK(r.metrics.steps == 0);
  CHECK(r.log.empty());
  CHECK(r.metrics.flight_accuracy == 0.0);
  CHECK(r.metrics.reward_collected == 1.0);
}

TEST_CASE("straight plan reaches every waypoint accurately") {
  const GridWorld w = empty_world({10, 4, 10}, 0.5);
  const Vec3 anchor{0.3, 0.2, 0.3};
  RiskWeights weights;
  const std::vector<Cell> cells{{1, 1, 1}, {2, 1, 2}, {3, 1, 3}, {4, 1, 4}};
  const PlanResult plan = plan_through(w, anchor, cells, weights);
  const ViewpointQualityMap map = simple_map({2.6, 0.7, 2.6});

  for (const Primitive primitive :
       {Primitive::kPosition, Primitive::kVelocity}) {
    SimConfig cfg;
    cfg.primitive = primitive;
    const SimResult r =
        simulate(plan, w, map, weights, cfg, ControllerConfig{});
    CHECK(r.metrics.steps > 0);
    CHECK(r.metrics.flight_accuracy < 0.05);
    CHECK((r.log.back().position - w.center(cells.back())).norm() <=
          cfg.waypoint_tolerance);
    CHECK(r.metrics.contacts_peak == 0);
    check_length_consistency(r);
    check_camera(r, map.pose().center);
    // Executed risk stays near the planned value on a clean straight run.
    CHECK(std::abs(r.metrics.risk_encountered - r.metrics.planned_risk) <=
          0.15 * r.metrics.planned_risk);
  }
}

TEST_CASE("two-contact course executes with matching contacts") {
  std::vector<Cell> occ;
  const Cell dims{12, 3, 12};
  add_pillar(occ, dims, 4, 5, 3, 4);
  add_pillar(occ, dims, 7, 8, 7, 8);
  const GridWorld w = world_with(dims, 1.0, occ);
  const Vec3 anchor{1.5, 0.4, 1.5};
  RiskWeights weights;
  weights.l_max = 25.0;
  const std::vector<Cell> cells{{1, 1, 1}, {1, 1, 2}, {1, 1, 3}, {1, 1, 4},
                                {2, 1, 5}, {3, 1, 5}, {4, 1, 5}, {5, 1, 5},
                                {6, 1, 5}, {7, 1, 5}, {8, 1, 5}, {9, 1, 5},
                                {10, 1, 6}, {10, 1, 7}, {10, 1, 8},
                                {10, 1, 9}, {9, 1, 10}};
  const PlanResult plan = plan_through(w, anchor, cells, weights);
  REQUIRE(plan.path.states.back().tether.contact_count() == 2);

  const ViewpointQualityMap map = simple_map({9.8, 0.9, 11.2});
  const SimResult r =
      simulate(plan, w, map, weights, SimConfig{}, ControllerConfig{});
  CHECK(r.metrics.contacts_peak == 2);
  CHECK(r.final_tether.contact_count() == 2);
  // Final stack matches the planner's terminal snapshot.
  const auto& want = plan.path.states.back().tether.contacts();
  REQUIRE(r.final_tether.contacts().size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK((r.final_tether.contacts()[i] - want[i]).norm() < 0.75);
  }
  check_length_consistency(r);
  check_camera(r, map.pose().center);
}

TEST_CASE("simulation is deterministic for a fixed seed") {
  const GridWorld w = empty_world({10, 4, 10}, 0.5);
  const Vec3 anchor{0.3, 0.2, 0.3};
  RiskWeights weights;
  const PlanResult plan =
      plan_through(w, anchor, {{1, 1, 1}, {2, 1, 2}, {3, 1, 3}}, weights);
  const ViewpointQualityMap map = simple_map({2.1, 0.7, 2.1});
  SimConfig cfg;
  cfg.noise_sigma = 0.01;
  cfg.seed = 42;
  const SimResult a =
      simulate(plan, w, map, weights, cfg, ControllerConfig{});
  const SimResult b =
      simulate(plan, w, map, weights, cfg, ControllerConfig{});
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].position == b.log[i].position);
    CHECK(a.log[i].total_length == b.log[i].total_length);
    CHECK(a.log[i].yaw == b.log[i].yaw);
  }

  SimConfig other = cfg;
  other.seed = 43;
  const SimResult c =
      simulate(plan, w, map, weights, other, ControllerConfig{});
  bool any_diff = c.log.size() != a.log.size();
  for (std::size_t i = 0; !any_diff && i < a.log.size(); ++i) {
    any_diff = !(a.log[i].position == c.log[i].position);
  }
  CHECK(any_diff);
}

TEST_CASE("noisy run still reaches the waypoints") {
  const GridWorld w = empty_world({10, 4, 10}, 0.5);
  const Vec3 anchor{0.3, 0.2, 0.3};
  RiskWeights weights;
  const std::vector<Cell> cells{{1, 1, 1}, {2, 1, 2}, {3, 1, 3}, {4, 1, 4}};
  const PlanResult plan = plan_through(w, anchor, cells, weights);
  const ViewpointQualityMap map = simple_map({2.6, 0.7, 2.6});
  SimConfig cfg;
  cfg.noise_sigma = 0.02;
  cfg.seed = 7;
  const SimResult r = simulate(plan, w, map, weights, cfg, ControllerConfig{});
  CHECK(r.metrics.steps > 0);
  CHECK((r.log.back().position - w.center(cells.back())).norm() <=
        cfg.waypoint_tolerance + 3.0 * cfg.noise_sigma);
}

TEST_CASE("failures carry the step index") {
  const GridWorld w = empty_world({10, 4, 10}, 0.5);
  const Vec3 anchor{0.3, 0.2, 0.3};
  RiskWeights weights;
  const PlanResult plan =
      plan_through(w, anchor, {{1, 1, 1}, {2, 1, 2}, {3, 1, 3}}, weights);
  const ViewpointQualityMap map = simple_map({2.1, 0.7, 2.1});
  SimConfig cfg;
  cfg.max_steps = 2;
  try {
    simulate(plan, w, map, weights, cfg, ControllerConfig{});
    FAIL("expected max-steps error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("velocity primitive refuses a vertical climb over the anchor") {
  const GridWorld w = empty_world({6, 6, 6}, 0.5);
  const Vec3 anchor{1.25, 0.2, 1.25};  // directly below the start column
  RiskWeights weights;
  const PlanResult plan =
      plan_through(w, anchor, {{2, 1, 2}, {2, 2, 2}, {2, 3, 2}}, weights);
  const ViewpointQualityMap map = simple_map({1.4, 0.8, 1.4});

  SimConfig cfg;
  cfg.primitive = Primitive::kVelocity;
  CHECK_THROWS_AS(simulate(plan, w, map, weights, cfg, ControllerConfig{}),
                  SingularityError);

  // Position control has no Jacobian to invert and climbs fine.
  cfg.primitive = Primitive::kPosition;
  const SimResult r = simulate(plan, w, map, weights, cfg, ControllerConfig{});
  CHECK((r.log.back().position - w.center({2, 3, 2})).norm() <=
        cfg.waypoint_tolerance);
}
