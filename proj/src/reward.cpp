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

#include "tetherplan/reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tetherplan {

const char* to_string(ViewGroup g) {
  switch (g) {
    case ViewGroup::kLeft:
      return "left";
    case ViewGroup::kRight:
      return "right";
    case ViewGroup::kFront:
      return "front";
    case ViewGroup::kBack:
      return "back";
    case ViewGroup::kAbove:
      return "above";
  }
  return "?";
}

namespace {

struct SampleLayout {
  double elevation;  // rad
  double azimuth;    // rad, relative to forward
  bool cap;          // cap ring samples form the `above` group
};

std::array<SampleLayout, ViewpointQualityMap::kSampleCount> make_layout() {
  std::array<SampleLayout, ViewpointQualityMap::kSampleCount> out;
  int i = 0;
  for (const double el : {20.0, 50.0}) {
    for (int k = 0; k < 12; ++k) {
      double az = 30.0 * k;
      if (az > 180.0) az -= 360.0;
      out[i++] = {radians(el), radians(az), false};
    }
  }
  for (int k = 0; k < 6; ++k) {
    double az = 60.0 * k;
    if (az > 180.0) az -= 360.0;
    out[i++] = {radians(80.0), radians(az), true};
  }
  return out;
}

ViewGroup group_of(const SampleLayout& s) {
  if (s.cap) return ViewGroup::kAbove;
  const double az = std::abs(degrees(s.azimuth));
  if (az <= 45.0) return ViewGroup::kFront;
  if (az >= 135.0) return ViewGroup::kBack;
  return s.azimuth > 0.0 ? ViewGroup::kLeft : ViewGroup::kRight;
}

}  // namespace

ViewpointQualityMap::ViewpointQualityMap(const AffordancePose& pose,
                                         std::span<const double> metrics)
    : pose_(pose) {
  if (!pose_.center.finite() || !pose_.forward.finite()) {
    throw ConfigError("affordance pose has non-finite components");
  }
  if (!(pose_.radius > 0.0)) {
    throw ConfigError("affordance radius must be positive");
  }
  if (std::abs(pose_.forward.y) > 1e-9) {
    throw ConfigError("affordance forward vector must be horizontal");
  }
  const double fn = pose_.forward.horizontal_norm();
  if (fn < 1e-12) {
    throw ConfigError("affordance forward vector must be nonzero");
  }
  pose_.forward = {pose_.forward.x / fn, 0.0, pose_.forward.z / fn};

  if (metrics.size() != kSampleCount) {
    throw ConfigError("expected 30 viewpoint metric values, got " +
                      std::to_string(metrics.size()));
  }
  for (double m : metrics) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ConfigError("viewpoint metrics must be non-negative");
    }
  }

  const Vec3 up{0.0, 1.0, 0.0};
  const Vec3 left = up.cross(pose_.forward);  // positive-azimuth side

  const auto layout = make_layout();
  const auto [lo_it, hi_it] =
      std::minmax_element(metrics.begin(), metrics.end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi - lo;

  for (int i = 0; i < kSampleCount; ++i) {
    const SampleLayout& s = layout[i];
    const double ce = std::cos(s.elevation);
    samples_[i].direction = pose_.forward * (ce * std::cos(s.azimuth)) +
                            left * (ce * std::sin(s.azimuth)) +
                            up * std::sin(s.elevation);
    samples_[i].group = group_of(s);
    samples_[i].metric = metrics[i];
    samples_[i].reward = span > 0.0 ? (hi - metrics[i]) / span : 1.0;
  }
}

int ViewpointQualityMap::nearest_sample(const Vec3& p) const {
  if ((p - pose_.center).norm() < 1e-12) {
    throw SingularityError("degenerate viewpoint");
  }
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSampleCount; ++i) {
    const double d = (p - sample_position(i)).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double effective_quality(const Vec3& p, const ViewpointQualityMap& map,
                         const GridWorld& world, bool require_poi_los) {
  const double q = map.quality(p);
  if (require_poi_los && !world.line_of_sight(p, map.pose().center)) {
    return 0.0;
  }
  return q;
}

}  // namespace tetherplan
