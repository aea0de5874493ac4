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

#include <array>
#include <span>
#include <string>

#include "tetherplan/geometry.hpp"
#include "tetherplan/grid_world.hpp"

namespace tetherplan {

// Pose of a point of interest. `forward` is the horizontal heading of the
// task; the hemisphere of candidate viewpoints is centered on `center` with
// the given radius.
struct AffordancePose {
  Vec3 center;
  Vec3 forward{0.0, 0.0, 1.0};  // horizontal unit vector
  double radius = 1.0;          // meters
};

enum class ViewGroup { kLeft, kRight, kFront, kBack, kAbove };

const char* to_string(ViewGroup g);

struct ViewpointSample {
  Vec3 direction;  // unit vector, non-negative vertical component
  ViewGroup group = ViewGroup::kFront;
  double metric = 0.0;  // mean(error x time), lower is better
  double reward = 0.0;  // normalized quality in [0, 1], higher is better
};

// Scored hemisphere of 30 candidate viewpoints around a point of interest.
//
// Layout (fixed, also the order metric values are supplied in): a ring of 12
// samples at 20 degrees elevation (azimuth 0, 30, ..., 330 relative to
// `forward`), a ring of 12 at 50 degrees, and a cap ring of 6 at 80 degrees
// (azimuth 0, 60, ..., 300). Positive azimuth turns toward up x forward.
// Ring samples belong to front (|az| <= 45), back (|az| >= 135), or the
// left/right flanks; the cap ring forms the above group. That yields exactly
// six samples per group.
//
// Rewards invert the raw metric by min-max normalization so that the
// lowest error-time product maps to 1; a constant metric maps every sample
// to 1.
class ViewpointQualityMap {
 public:
  static constexpr int kSampleCount = 30;

  ViewpointQualityMap(const AffordancePose& pose,
                      std::span<const double> metrics);

  const AffordancePose& pose() const { return pose_; }
  const std::array<ViewpointSample, kSampleCount>& samples() const {
    return samples_;
  }
  Vec3 sample_position(int i) const {
    return pose_.center + samples_[i].direction * pose_.radius;
  }

  // Index of the sample whose hemisphere position is nearest to p; ties go
  // to the lowest index. Throws when p coincides with the center.
  int nearest_sample(const Vec3& p) const;

  // Reward of the nearest sample.
  double quality(const Vec3& p) const {
    return samples_[nearest_sample(p)].reward;
  }

 private:
  AffordancePose pose_;
  std::array<ViewpointSample, kSampleCount> samples_;
};

// Quality with an optional occlusion rule: when require_poi_los is set, a
// point without line of sight to the center scores zero.
double effective_quality(const Vec3& p, const ViewpointQualityMap& map,
                         const GridWorld& world, bool require_poi_los);

}  // namespace tetherplan
