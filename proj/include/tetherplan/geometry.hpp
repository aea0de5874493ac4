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

#include <algorithm>
#include <cmath>

#include "tetherplan/errors.hpp"

namespace tetherplan {

inline constexpr double kPi = 3.14159265358979323846;

inline double radians(double degrees) { return degrees * kPi / 180.0; }
inline double degrees(double rad) { return rad * 180.0 / kPi; }

// 3-D vector / point. The y axis is vertical (up); x and z span the
// horizontal plane.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
  Vec3 operator/(double k) const { return {x / k, y / k, z / k}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  friend Vec3 operator*(double k, const Vec3& v) { return v * k; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double horizontal_norm() const { return std::hypot(x, z); }
  Vec3 normalized() const {
    const double n = norm();
    if (n == 0.0) throw SingularityError("cannot normalize zero vector");
    return *this / n;
  }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

using Point3 = Vec3;

inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) {
  return a + (b - a) * t;
}

// Tether coordinates: cord length, elevation angle above the horizontal
// plane, and azimuth measured in the horizontal plane with azimuth 0 along
// +z and pi/2 along +x.
struct PolarCoords {
  double length = 0.0;     // meters, >= 0
  double elevation = 0.0;  // rad, in [-pi/2, pi/2]
  double azimuth = 0.0;    // rad, in (-pi, pi]
};

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a = kPi;
  return a;
}

// Polar-to-Cartesian map under the taut straight-cord assumption.
inline Vec3 forward_position(const PolarCoords& p, const Vec3& origin) {
  const double ct = std::cos(p.elevation);
  return origin + Vec3{p.length * ct * std::sin(p.azimuth),
                       p.length * std::sin(p.elevation),
                       p.length * ct * std::cos(p.azimuth)};
}

// Cartesian-to-polar map. Throws when q coincides with origin; at the
// vertical pole the azimuth degenerates to atan2(0, 0) == 0 and callers that
// track a continuous azimuth must substitute their own hint.
inline PolarCoords inverse_position(const Vec3& q, const Vec3& origin) {
  const Vec3 d = q - origin;
  const double len = d.norm();
  if (len == 0.0) throw SingularityError("zero-length tether");
  PolarCoords p;
  p.length = len;
  p.elevation = std::asin(std::clamp(d.y / len, -1.0, 1.0));
  p.azimuth = std::atan2(d.x, d.z);
  return p;
}

struct Mat3 {
  double m[3][3] = {};
};

// Jacobian of forward_position with respect to (length, elevation, azimuth).
// Its determinant has magnitude L^2 * |cos(elevation)|, vanishing at the
// vertical pole.
inline Mat3 tether_jacobian(const PolarCoords& p) {
  const double st = std::sin(p.elevation);
  const double ct = std::cos(p.elevation);
  const double sp = std::sin(p.azimuth);
  const double cp = std::cos(p.azimuth);
  const double l = p.length;
  Mat3 j;
  j.m[0][0] = ct * sp;
  j.m[0][1] = -l * st * sp;
  j.m[0][2] = l * ct * cp;
  j.m[1][0] = st;
  j.m[1][1] = l * ct;
  j.m[1][2] = 0.0;
  j.m[2][0] = ct * cp;
  j.m[2][1] = -l * st * cp;
  j.m[2][2] = -l * ct * sp;
  return j;
}

inline Vec3 mat_apply(const Mat3& a, const Vec3& v) {
  return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
          a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
          a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
}

// Solves the 3x3 system A x = b by Gaussian elimination with partial
// pivoting. Throws SingularityError when a pivot collapses.
inline Vec3 solve3(const Mat3& a, const Vec3& b) {
  double aug[3][4] = {{a.m[0][0], a.m[0][1], a.m[0][2], b.x},
                      {a.m[1][0], a.m[1][1], a.m[1][2], b.y},
                      {a.m[2][0], a.m[2][1], a.m[2][2], b.z}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    }
    if (std::abs(aug[pivot][col]) < 1e-300) {
      throw SingularityError("singular 3x3 system");
    }
    if (pivot != col) std::swap(aug[pivot], aug[col]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = aug[r][col] / aug[col][col];
      for (int c = col; c < 4; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  return {aug[0][3] / aug[0][0], aug[1][3] / aug[1][1], aug[2][3] / aug[2][2]};
}

}  // namespace tetherplan
