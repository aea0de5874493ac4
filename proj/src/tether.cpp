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

#include "tetherplan/tether.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tetherplan {

namespace {

// Contact points sit this fraction of a cell off the obstacle corner so the
// adjacent polyline segments clear the conservative visibility test.
constexpr double kContactOffset = 0.01;

// Candidate contact point on the blocking cell: a corner vertex nudged
// outward along the corner diagonal, or an edge midpoint nudged outward in
// the plane perpendicular to the edge (the only feasible kind when the cell
// spans the full workspace height). Returns the candidate nearest the graze
// point that keeps both adjacent tether segments clear.
std::optional<Vec3> place_contact(const GridWorld& world, const Vec3& vertex,
                                  const Vec3& blocked_pos) {
  const auto hit = world.trace_segment(vertex, blocked_pos);
  if (!hit) return std::nullopt;  // nothing blocks; caller logic error
  if (!world.in_bounds(hit->cell)) return std::nullopt;  // boundary, no corner

  const Vec3 graze = lerp(vertex, blocked_pos, hit->t);
  const Vec3 cc = world.center(hit->cell);
  const double h = 0.5 * world.cell_size();
  const double off = kContactOffset * world.cell_size();

  struct Candidate {
    Vec3 point;     // snapped location on the cell surface
    Vec3 outward;   // unit offset direction
  };
  std::vector<Candidate> candidates;
  candidates.reserve(20);
  for (const double sx : {-h, h}) {
    for (const double sy : {-h, h}) {
      for (const double sz : {-h, h}) {
        const Vec3 d{sx, sy, sz};
        candidates.push_back({cc + d, d.normalized()});
      }
    }
  }
  for (int axis = 0; axis < 3; ++axis) {
    for (const double s1 : {-h, h}) {
      for (const double s2 : {-h, h}) {
        Vec3 d{};
        if (axis == 0) d = {0.0, s1, s2};
        if (axis == 1) d = {s1, 0.0, s2};
        if (axis == 2) d = {s1, s2, 0.0};
        candidates.push_back({cc + d, d.normalized()});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& a, const Candidate& b) {
              return (a.point - graze).norm() < (b.point - graze).norm();
            });

  for (const Candidate& cand : candidates) {
    const Vec3 cp = cand.point + cand.outward * off;
    if (!world.is_free(world.cell_at(cp))) continue;
    if (!world.line_of_sight(vertex, cp)) continue;
    if (!world.line_of_sight(cp, blocked_pos)) continue;
    return cp;
  }
  return std::nullopt;
}

}  // namespace

TetherState::TetherState(const Vec3& anchor, const Vec3& uav)
    : anchor_(anchor), uav_(uav) {
  if ((uav_ - anchor_).norm() == 0.0) {
    throw SingularityError("zero-length tether");
  }
  refresh();
}

TetherState::TetherState(const Vec3& anchor, std::vector<Vec3> contacts,
                         const Vec3& uav)
    : anchor_(anchor), contacts_(std::move(contacts)), uav_(uav) {
  const Vec3* prev = &anchor_;
  for (const Vec3& cp : contacts_) {
    if ((cp - *prev).norm() == 0.0) {
      throw SingularityError("coincident tether vertices");
    }
    prev = &cp;
  }
  if ((uav_ - *prev).norm() == 0.0) {
    throw SingularityError("zero-length tether");
  }
  refresh();
}

double TetherState::static_length() const {
  double sum = 0.0;
  const Vec3* prev = &anchor_;
  for (const Vec3& cp : contacts_) {
    sum += (cp - *prev).norm();
    prev = &cp;
  }
  return sum;
}

PolarCoords TetherState::effective_controls() const {
  const Vec3& origin = last_vertex();
  PolarCoords p = inverse_position(uav_, origin);
  const Vec3 d = uav_ - origin;
  if (d.horizontal_norm() < 1e-12) p.azimuth = azimuth_hint_;
  return p;
}

void TetherState::refresh() {
  const Vec3& origin = last_vertex();
  const Vec3 d = uav_ - origin;
  total_length_ = static_length() + d.norm();
  if (d.horizontal_norm() >= 1e-12) {
    azimuth_hint_ = std::atan2(d.x, d.z);
  }
}

TetherState update_contacts(const TetherState& state, const Vec3& new_uav,
                            const GridWorld& world) {
  if (!world.is_free(world.cell_at(new_uav))) {
    throw CollisionError("uav position in collision");
  }
  const Vec3 old_uav = state.uav();
  const double step = (new_uav - old_uav).norm();
  if (step > world.cell_size() * (1.0 + 1e-9)) {
    throw Error("tether update step exceeds one cell");
  }

  TetherState next = state;
  next.uav_ = new_uav;

  // Relax: pop the top contact while its predecessor vertex is visible from
  // the new position.
  while (!next.contacts_.empty()) {
    const Vec3& before = next.contacts_.size() >= 2
                             ? next.contacts_[next.contacts_.size() - 2]
                             : next.anchor_;
    if (world.line_of_sight(new_uav, before)) {
      next.contacts_.pop_back();
    } else {
      break;
    }
  }

  // Push: while the last vertex is hidden, bisect the motion for the
  // visibility transition and wrap the cord around the corner that caused it.
  double t_lo = 0.0;
  int guard = 0;
  while (!world.line_of_sight(new_uav, next.last_vertex())) {
    if (++guard > 16) {
      throw TetherInfeasibleError("tether infeasible: contact planning did "
                                  "not converge");
    }
    const Vec3 vertex = next.last_vertex();
    if (!world.line_of_sight(lerp(old_uav, new_uav, t_lo), vertex)) {
      throw TetherInfeasibleError("tether infeasible: cord pinched");
    }
    double lo = t_lo, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (world.line_of_sight(lerp(old_uav, new_uav, mid), vertex)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const Vec3 blocked_pos = lerp(old_uav, new_uav, hi);
    const auto cp = place_contact(world, vertex, blocked_pos);
    if (!cp) {
      throw TetherInfeasibleError("tether infeasible: no contact vertex "
                                  "found");
    }
    next.contacts_.push_back(*cp);
    t_lo = hi;
  }

  next.refresh();
  return next;
}

TetherState tether_step(const TetherState& state, const Vec3& new_uav,
                        const GridWorld& world) {
  const Vec3 from = state.uav();
  const double dist = (new_uav - from).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(
                                dist / world.cell_size() - 1e-12)));
  TetherState cur = state;
  for (int i = 1; i <= n; ++i) {
    const Vec3 target =
        i == n ? new_uav : lerp(from, new_uav, static_cast<double>(i) / n);
    cur = update_contacts(cur, target, world);
  }
  return cur;
}

bool tether_feasible(const TetherState& state, const GridWorld& world) {
  const Vec3* prev = &state.anchor();
  for (const Vec3& cp : state.contacts()) {
    if (!world.line_of_sight(*prev, cp)) return false;
    prev = &cp;
  }
  return world.line_of_sight(*prev, state.uav());
}

}  // namespace tetherplan
