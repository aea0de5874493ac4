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

#include "tetherplan/grid_world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace tetherplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerance (in cell units) for deciding that a traced point sits exactly on
// a cell boundary plane.
constexpr double kPlaneEps = 1e-9;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

template <typename T>
std::uint64_t fnv1a_value(std::uint64_t h, const T& v) {
  return fnv1a(h, &v, sizeof(v));
}

std::uint64_t access_key(int from, int to) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
         static_cast<std::uint32_t>(to);
}

// Lower envelope of the parabolas y = f[q] + (x - (q + shift))^2, sampled at
// integer x. Entries with f[q] == inf are ignored.
void parabola_envelope(const std::vector<double>& f, double shift,
                       std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  out.assign(f.size(), kInf);
  static thread_local std::vector<int> hull;
  static thread_local std::vector<double> breaks;
  hull.clear();
  breaks.clear();
  hull.reserve(f.size());
  breaks.assign(f.size() + 1, 0.0);
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    const double cq = q + shift;
    double s = -kInf;
    while (!hull.empty()) {
      const int v = hull.back();
      const double cv = v + shift;
      s = ((f[q] + cq * cq) - (f[v] + cv * cv)) / (2.0 * (cq - cv));
      if (s <= breaks[hull.size() - 1]) {
        hull.pop_back();
      } else {
        break;
      }
    }
    if (hull.empty()) s = -kInf;
    breaks[hull.size()] = s;
    hull.push_back(q);
    breaks[hull.size()] = kInf;
  }
  if (hull.empty()) return;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    while (breaks[k + 1] < i) ++k;
    const double c = hull[k] + shift;
    out[i] = f[hull[k]] + (i - c) * (i - c);
  }
}

// One axis pass of the obstacle-surface distance transform: replaces each
// line entry with min over sources m of line[m] + g(|i - m|)^2 where
// g(d) = max(0, d - 1/2). The half-cell shift accounts for measuring to the
// cube surface instead of the cube center.
void axis_pass(std::vector<double>& line) {
  static thread_local std::vector<double> lo, hi;
  parabola_envelope(line, 0.5, lo);
  parabola_envelope(line, -0.5, hi);
  for (std::size_t i = 0; i < line.size(); ++i) {
    line[i] = std::min({line[i], lo[i], hi[i]});
  }
}

}  // namespace

GridWorld::GridWorld(GridWorldParams params)
    : dims_(params.dims), cell_size_(params.cell_size) {
  if (dims_.x <= 0 || dims_.y <= 0 || dims_.z <= 0) {
    throw ConfigError("grid dims must be positive");
  }
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
    throw ConfigError("cell_size must be positive");
  }
  const std::size_t n =
      static_cast<std::size_t>(dims_.x) * dims_.y * dims_.z;
  occ_.assign(n, 0);
  for (const Cell& c : params.occupied) {
    if (!in_bounds(c)) {
      throw ConfigError("occupied cell (" + std::to_string(c.x) + ", " +
                        std::to_string(c.y) + ", " + std::to_string(c.z) +
                        ") outside grid dims");
    }
    occ_[index(c)] = 1;
  }
  occupied_count_ = 0;
  for (auto v : occ_) occupied_count_ += v;

  for (const AccessEntry& e : params.access) {
    access_[access_key(e.from, e.to)] = e.difficulty;
  }

  build_distance_field();
  build_voids(params.void_labels);

  // Access entries must reference known region ids.
  for (const AccessEntry& e : params.access) {
    if (!known_voids_.contains(e.from) || !known_voids_.contains(e.to)) {
      throw ConfigError("access entry references unknown void id " +
                        std::to_string(known_voids_.contains(e.from) ? e.to
                                                                     : e.from));
    }
  }

  std::uint64_t h = 1469598103934665603ull;
  h = fnv1a_value(h, dims_.x);
  h = fnv1a_value(h, dims_.y);
  h = fnv1a_value(h, dims_.z);
  h = fnv1a_value(h, cell_size_);
  h = fnv1a(h, occ_.data(), occ_.size());
  h = fnv1a(h, void_of_.data(), void_of_.size() * sizeof(int));
  std::vector<AccessEntry> sorted_access = params.access;
  std::sort(sorted_access.begin(), sorted_access.end(),
            [](const AccessEntry& a, const AccessEntry& b) {
              return std::tie(a.from, a.to) < std::tie(b.from, b.to);
            });
  for (const AccessEntry& e : sorted_access) {
    h = fnv1a_value(h, e.from);
    h = fnv1a_value(h, e.to);
    h = fnv1a_value(h, e.difficulty);
  }
  hash_ = h;
}

void GridWorld::build_distance_field() {
  const std::size_t n = occ_.size();
  // Squared distance in cell units from each cell center to the nearest
  // occupied cube, transformed one axis at a time.
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = occ_[i] ? 0.0 : kInf;

  std::vector<double> line;
  // x axis
  line.resize(dims_.x);
  for (int z = 0; z < dims_.z; ++z) {
    for (int y = 0; y < dims_.y; ++y) {
      for (int x = 0; x < dims_.x; ++x) line[x] = d2[index({x, y, z})];
      axis_pass(line);
      for (int x = 0; x < dims_.x; ++x) d2[index({x, y, z})] = line[x];
    }
  }
  // y axis
  line.resize(dims_.y);
  for (int z = 0; z < dims_.z; ++z) {
    for (int x = 0; x < dims_.x; ++x) {
      for (int y = 0; y < dims_.y; ++y) line[y] = d2[index({x, y, z})];
      axis_pass(line);
      for (int y = 0; y < dims_.y; ++y) d2[index({x, y, z})] = line[y];
    }
  }
  // z axis
  line.resize(dims_.z);
  for (int y = 0; y < dims_.y; ++y) {
    for (int x = 0; x < dims_.x; ++x) {
      for (int z = 0; z < dims_.z; ++z) line[z] = d2[index({x, y, z})];
      axis_pass(line);
      for (int z = 0; z < dims_.z; ++z) d2[index({x, y, z})] = line[z];
    }
  }

  dist_.assign(n, 0.0);
  for (int z = 0; z < dims_.z; ++z) {
    for (int y = 0; y < dims_.y; ++y) {
      for (int x = 0; x < dims_.x; ++x) {
        const std::size_t i = index({x, y, z});
        if (occ_[i]) continue;
        const double to_cube =
            d2[i] == kInf ? kInf : cell_size_ * std::sqrt(d2[i]);
        const double bx = std::min(x + 0.5, dims_.x - x - 0.5);
        const double by = std::min(y + 0.5, dims_.y - y - 0.5);
        const double bz = std::min(z + 0.5, dims_.z - z - 0.5);
        const double to_boundary = cell_size_ * std::min({bx, by, bz});
        dist_[i] = std::min(to_cube, to_boundary);
      }
    }
  }
}

double GridWorld::distance_at_center(const Cell& c) const {
  if (!is_free(c)) throw CollisionError("in-collision query");
  return dist_[index(c)];
}

double GridWorld::boundary_distance(const Vec3& p) const {
  const Vec3 w = workspace_size();
  return std::min({p.x, w.x - p.x, p.y, w.y - p.y, p.z, w.z - p.z});
}

double GridWorld::distance_to_obstacle(const Vec3& p) const {
  const Cell c = cell_at(p);
  if (!is_free(c)) throw CollisionError("in-collision query");
  const Vec3 ctr = center(c);
  const double off = (p - ctr).norm();
  if (off < 1e-12) return dist_[index(c)];

  // The center field bounds how far the nearest cube can be; scan the
  // occupied cells inside that radius and keep the exact minimum.
  double best = boundary_distance(p);
  const double bound = dist_[index(c)] + off;
  const int r = static_cast<int>(std::ceil(bound / cell_size_)) + 1;
  const double half = 0.5 * cell_size_;
  for (int z = std::max(0, c.z - r); z <= std::min(dims_.z - 1, c.z + r);
       ++z) {
    for (int y = std::max(0, c.y - r); y <= std::min(dims_.y - 1, c.y + r);
         ++y) {
      for (int x = std::max(0, c.x - r); x <= std::min(dims_.x - 1, c.x + r);
           ++x) {
        const Cell q{x, y, z};
        if (!occ_[index(q)]) continue;
        const Vec3 qc = center(q);
        const double dx = std::max(0.0, std::abs(p.x - qc.x) - half);
        const double dy = std::max(0.0, std::abs(p.y - qc.y) - half);
        const double dz = std::max(0.0, std::abs(p.z - qc.z) - half);
        best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
    }
  }
  return best;
}

bool GridWorld::blocked_for_ray(long long ix, long long iy,
                                long long iz) const {
  if (ix < 0 || ix >= dims_.x || iy < 0 || iy >= dims_.y || iz < 0 ||
      iz >= dims_.z) {
    return true;  // outside the workspace counts as obstacle
  }
  return occ_[index({static_cast<int>(ix), static_cast<int>(iy),
                     static_cast<int>(iz)})] != 0;
}

std::optional<RayHit> GridWorld::trace_segment(const Vec3& a,
                                               const Vec3& b) const {
  // Work in cell units so integer coordinates are cell boundaries.
  const double ua[3] = {a.x / cell_size_, a.y / cell_size_, a.z / cell_size_};
  const double ub[3] = {b.x / cell_size_, b.y / cell_size_, b.z / cell_size_};
  const double d[3] = {ub[0] - ua[0], ub[1] - ua[1], ub[2] - ua[2]};

  // Event times: segment endpoints plus every crossing of an integer plane.
  static thread_local std::vector<double> events;
  events.clear();
  events.push_back(0.0);
  events.push_back(1.0);
  for (int axis = 0; axis < 3; ++axis) {
    if (std::abs(d[axis]) < 1e-15) continue;
    const double lo = std::min(ua[axis], ub[axis]);
    const double hi = std::max(ua[axis], ub[axis]);
    for (long long k = static_cast<long long>(std::ceil(lo));
         k <= static_cast<long long>(std::floor(hi)); ++k) {
      const double t = (static_cast<double>(k) - ua[axis]) / d[axis];
      if (t > 0.0 && t < 1.0) events.push_back(t);
    }
  }
  std::sort(events.begin(), events.end());

  // Candidate cell indices touched by the point u along one axis: both sides
  // when u sits on a boundary plane, the containing cell otherwise.
  const auto axis_candidates = [](double u, long long out[2]) -> int {
    const double r = std::round(u);
    if (std::abs(u - r) <= kPlaneEps) {
      const long long k = static_cast<long long>(r);
      out[0] = k - 1;
      out[1] = k;
      return 2;
    }
    out[0] = static_cast<long long>(std::floor(u));
    return 1;
  };

  const auto touched_block =
      [&](double t) -> std::optional<Cell> {
    long long cx[2], cy[2], cz[2];
    const int nx = axis_candidates(ua[0] + t * d[0], cx);
    const int ny = axis_candidates(ua[1] + t * d[1], cy);
    const int nz = axis_candidates(ua[2] + t * d[2], cz);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        for (int k = 0; k < nz; ++k) {
          if (blocked_for_ray(cx[i], cy[j], cz[k])) {
            return Cell{static_cast<int>(cx[i]), static_cast<int>(cy[j]),
                        static_cast<int>(cz[k])};
          }
        }
      }
    }
    return std::nullopt;
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const double t = events[i];
    if (auto hit = touched_block(t)) return RayHit{t, *hit};
    if (i + 1 < events.size() && events[i + 1] - t > 1e-13) {
      const double tm = 0.5 * (t + events[i + 1]);
      long long ix = static_cast<long long>(std::floor(ua[0] + tm * d[0]));
      long long iy = static_cast<long long>(std::floor(ua[1] + tm * d[1]));
      long long iz = static_cast<long long>(std::floor(ua[2] + tm * d[2]));
      if (blocked_for_ray(ix, iy, iz)) {
        return RayHit{t, Cell{static_cast<int>(ix), static_cast<int>(iy),
                              static_cast<int>(iz)}};
      }
    }
  }
  return std::nullopt;
}

double GridWorld::isovist_score(const Vec3& p, int ray_count,
                                double r_max) const {
  if (ray_count < 6) throw ConfigError("isovist needs at least 6 rays");
  if (!is_free(cell_at(p))) throw CollisionError("in-collision query");
  if (r_max <= 0.0) r_max = diagonal();

  // Fibonacci sphere: deterministic, near-uniform directions.
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  double sum = 0.0;
  for (int i = 0; i < ray_count; ++i) {
    const double v = 1.0 - 2.0 * (i + 0.5) / ray_count;  // vertical component
    const double rho = std::sqrt(std::max(0.0, 1.0 - v * v));
    const double az = golden * i;
    const Vec3 dir{rho * std::cos(az), v, rho * std::sin(az)};
    const auto hit = trace_segment(p, p + dir * r_max);
    sum += hit ? hit->t * r_max : r_max;
  }
  return sum / (static_cast<double>(ray_count) * r_max);
}

double GridWorld::vertical_clearance(const Vec3& p) const {
  const Cell c = cell_at(p);
  if (!is_free(c)) throw CollisionError("in-collision query");
  double above = dims_.y * cell_size_ - p.y;
  for (int y = c.y + 1; y < dims_.y; ++y) {
    if (occ_[index({c.x, y, c.z})]) {
      above = y * cell_size_ - p.y;
      break;
    }
  }
  double below = p.y;
  for (int y = c.y - 1; y >= 0; --y) {
    if (occ_[index({c.x, y, c.z})]) {
      below = p.y - (y + 1) * cell_size_;
      break;
    }
  }
  return std::min(above, below);
}

void GridWorld::build_voids(
    const std::vector<std::pair<Cell, int>>& supplied) {
  const std::size_t n = occ_.size();
  void_of_.assign(n, -1);

  const auto neighbors26 = [&](const Cell& c, auto&& fn) {
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const Cell q{c.x + dx, c.y + dy, c.z + dz};
          if (is_free(q)) fn(q);
        }
      }
    }
  };

  if (supplied.empty()) {
    int next = 0;
    for (int x = 0; x < dims_.x; ++x) {
      for (int y = 0; y < dims_.y; ++y) {
        for (int z = 0; z < dims_.z; ++z) {
          const Cell c{x, y, z};
          if (!is_free(c) || void_of_[index(c)] != -1) continue;
          const int id = next++;
          std::deque<Cell> queue{c};
          void_of_[index(c)] = id;
          while (!queue.empty()) {
            const Cell cur = queue.front();
            queue.pop_front();
            neighbors26(cur, [&](const Cell& q) {
              if (void_of_[index(q)] == -1) {
                void_of_[index(q)] = id;
                queue.push_back(q);
              }
            });
          }
        }
      }
    }
    void_count_ = next;
    for (int id = 0; id < void_count_; ++id) known_voids_.insert(id);
    return;
  }

  // Supplied labels: verify they partition free space into connected pieces.
  std::unordered_map<int, std::vector<Cell>> groups;
  for (const auto& [cell, id] : supplied) {
    if (!in_bounds(cell)) {
      throw ConfigError("void label on out-of-bounds cell");
    }
    if (!is_free(cell)) {
      throw ConfigError("void " + std::to_string(id) +
                        " labels an occupied cell");
    }
    if (void_of_[index(cell)] != -1) {
      throw ConfigError("cell labeled twice in void map");
    }
    void_of_[index(cell)] = id;
    groups[id].push_back(cell);
  }
  for (int x = 0; x < dims_.x; ++x) {
    for (int y = 0; y < dims_.y; ++y) {
      for (int z = 0; z < dims_.z; ++z) {
        const Cell c{x, y, z};
        if (is_free(c) && void_of_[index(c)] == -1) {
          throw ConfigError("free cell (" + std::to_string(x) + ", " +
                            std::to_string(y) + ", " + std::to_string(z) +
                            ") missing a void label");
        }
      }
    }
  }
  for (const auto& [id, cells] : groups) {
    std::unordered_map<std::size_t, bool> seen;
    std::deque<Cell> queue{cells.front()};
    seen[index(cells.front())] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const Cell cur = queue.front();
      queue.pop_front();
      neighbors26(cur, [&](const Cell& q) {
        if (void_of_[index(q)] == id && !seen[index(q)]) {
          seen[index(q)] = true;
          ++reached;
          queue.push_back(q);
        }
      });
    }
    if (reached != cells.size()) {
      throw ConfigError("void " + std::to_string(id) +
                        " is not 26-connected");
    }
    known_voids_.insert(id);
  }
  void_count_ = static_cast<int>(groups.size());
}

double GridWorld::access_difficulty(int from_void, int to_void) const {
  const auto it = access_.find(access_key(from_void, to_void));
  return it == access_.end() ? 0.0 : it->second;
}

}  // namespace tetherplan
